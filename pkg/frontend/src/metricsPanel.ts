/** Three-panel metric figure: efficiency, production cost, attention entropy.
 *
 * One line per (policy, dynamic) series, mean with a standard-deviation band,
 * epochs on a logarithmic axis. Rendering is deterministic: same CSV bytes in,
 * same SVG bytes out.
 */
import { parseCsv, requireColumns, Table } from "./csv";
import { fmt, linearTicks, logTicks, polylinePoints, svgDocument, tag, text } from "./svg";

export interface MetricsPanelSpec {
    aggregateCsv: string; // file contents
    width?: number;
    height?: number;
}

interface SeriesPoint {
    epoch: number;
    mean: number;
    std: number | null;
}

const PANEL_METRICS: [string, string][] = [
    ["efficiency", "Market efficiency"],
    ["total_cost", "Total production cost"],
    ["entropy", "Attention entropy"],
];

const POLICY_ORDER = ["constant", "popularity", "quality", "mixed"];
const POLICY_COLORS: Record<string, string> = {
    constant: "#4c72b0",
    popularity: "#dd8452",
    quality: "#55a868",
    mixed: "#c44e52",
};
const FALLBACK_COLORS = ["#8172b3", "#937860", "#da8bc3", "#8c8c8c"];

function seriesSort(a: string, b: string): number {
    const [pa, da] = a.split("/");
    const [pb, db] = b.split("/");
    const ia = POLICY_ORDER.indexOf(pa);
    const ib = POLICY_ORDER.indexOf(pb);
    if (ia !== ib) {
        return (ia < 0 ? 99 : ia) - (ib < 0 ? 99 : ib);
    }
    if (pa !== pb) {
        return pa < pb ? -1 : 1;
    }
    return da < db ? -1 : da > db ? 1 : 0;
}

function collectSeries(table: Table, metric: string): Map<string, SeriesPoint[]> {
    const idx = requireColumns(table, ["policy", "dynamic", "epoch", "metric", "mean", "std"],
        "metrics panel input");
    const series = new Map<string, SeriesPoint[]>();
    for (const row of table.rows) {
        if (row[idx.get("metric")!] !== metric) {
            continue;
        }
        const key = `${row[idx.get("policy")!]}/${row[idx.get("dynamic")!]}`;
        const stdCell = row[idx.get("std")!];
        const point: SeriesPoint = {
            epoch: Number(row[idx.get("epoch")!]),
            mean: Number(row[idx.get("mean")!]),
            std: stdCell === "" ? null : Number(stdCell),
        };
        if (!series.has(key)) {
            series.set(key, []);
        }
        series.get(key)!.push(point);
    }
    for (const pts of series.values()) {
        pts.sort((a, b) => a.epoch - b.epoch);
    }
    return series;
}

export function renderMetricsPanel(spec: MetricsPanelSpec): string {
    const table = parseCsv(spec.aggregateCsv);
    const width = spec.width ?? 1260;
    const height = spec.height ?? 420;
    const margin = { left: 64, right: 16, top: 56, bottom: 44 };
    const panelWidth = Math.floor((width - 24 * 2) / 3);

    const allKeys = new Set<string>();
    const perMetric = new Map<string, Map<string, SeriesPoint[]>>();
    for (const [metric] of PANEL_METRICS) {
        const s = collectSeries(table, metric);
        perMetric.set(metric, s);
        for (const k of s.keys()) {
            allKeys.add(k);
        }
    }
    if (allKeys.size === 0) {
        throw new Error("metrics panel input: no rows for efficiency/total_cost/entropy");
    }
    const keys = [...allKeys].sort(seriesSort);
    const colorOf = new Map<string, string>();
    let fallback = 0;
    for (const key of keys) {
        const policy = key.split("/")[0];
        colorOf.set(key, POLICY_COLORS[policy] ?? FALLBACK_COLORS[fallback++ % FALLBACK_COLORS.length]);
    }

    const parts: string[] = [];
    parts.push(tag("rect", { x: 0, y: 0, width, height, fill: "#ffffff" }));

    // legend row
    let lx = margin.left;
    for (const key of keys) {
        const [policy, dynamic] = key.split("/");
        const dash = dynamic === "PR" ? "6,4" : "none";
        parts.push(tag("line", {
            x1: lx, y1: 20, x2: lx + 26, y2: 20, stroke: colorOf.get(key)!,
            "stroke-width": 2.2, "stroke-dasharray": dash, class: "legend-line",
        }));
        parts.push(text(lx + 31, 24, `${policy} ${dynamic}`, { "font-size": 12, "font-family": "sans-serif" }));
        lx += 30 + 9 * (policy.length + dynamic.length) + 18;
    }

    PANEL_METRICS.forEach(([metric, title], panelIdx) => {
        const series = perMetric.get(metric)!;
        const x0 = panelIdx * (panelWidth + 24) + margin.left;
        const xSpan = panelWidth - margin.left / 2 - margin.right;
        const y0 = margin.top;
        const ySpan = height - margin.top - margin.bottom;

        let epochLo = Infinity;
        let epochHi = 1;
        let vLo = Infinity;
        let vHi = -Infinity;
        for (const pts of series.values()) {
            for (const p of pts) {
                if (p.epoch >= 1) {
                    epochLo = Math.min(epochLo, p.epoch);
                    epochHi = Math.max(epochHi, p.epoch);
                    const s = p.std ?? 0;
                    vLo = Math.min(vLo, p.mean - s);
                    vHi = Math.max(vHi, p.mean + s);
                }
            }
        }
        if (!Number.isFinite(epochLo)) {
            throw new Error(`metrics panel input: metric "${metric}" has no epochs >= 1`);
        }
        if (vHi === vLo) {
            vHi = vLo + 1;
        }
        const pad = 0.05 * (vHi - vLo);
        vLo -= pad;
        vHi += pad;
        const sx = (epoch: number) =>
            x0 + ((Math.log10(epoch) - Math.log10(epochLo)) / (Math.log10(epochHi) - Math.log10(epochLo))) * xSpan;
        const sy = (v: number) => y0 + ySpan - ((v - vLo) / (vHi - vLo)) * ySpan;

        // frame and ticks
        parts.push(tag("rect", {
            x: x0, y: y0, width: xSpan, height: ySpan,
            fill: "none", stroke: "#444444", "stroke-width": 1, class: "panel-frame",
        }));
        for (const tick of logTicks(epochLo, epochHi)) {
            const tx = sx(tick);
            parts.push(tag("line", { x1: tx, y1: y0 + ySpan, x2: tx, y2: y0 + ySpan + 5, stroke: "#444444", "stroke-width": 1 }));
            parts.push(text(tx, y0 + ySpan + 18, String(tick),
                { "font-size": 11, "font-family": "sans-serif", "text-anchor": "middle" }));
        }
        for (const tick of linearTicks(vLo, vHi, 5)) {
            const ty = sy(tick);
            parts.push(tag("line", { x1: x0 - 5, y1: ty, x2: x0, y2: ty, stroke: "#444444", "stroke-width": 1 }));
            parts.push(text(x0 - 8, ty + 4, tick.toPrecision(3),
                { "font-size": 11, "font-family": "sans-serif", "text-anchor": "end" }));
        }
        parts.push(text(x0 + xSpan / 2, y0 - 10, title,
            { "font-size": 14, "font-family": "sans-serif", "text-anchor": "middle", "font-weight": "bold" }));
        parts.push(text(x0 + xSpan / 2, height - 8, "epoch",
            { "font-size": 12, "font-family": "sans-serif", "text-anchor": "middle" }));

        // bands first so every mean line draws on top
        for (const key of keys) {
            const pts = (series.get(key) ?? []).filter((p) => p.epoch >= 1);
            if (pts.length === 0 || pts.some((p) => p.std === null)) {
                continue;
            }
            const upper: [number, number][] = pts.map((p) => [sx(p.epoch), sy(p.mean + (p.std ?? 0))]);
            const lower: [number, number][] = [...pts].reverse().map((p) => [sx(p.epoch), sy(p.mean - (p.std ?? 0))]);
            parts.push(tag("polygon", {
                points: polylinePoints([...upper, ...lower]),
                fill: colorOf.get(key)!, "fill-opacity": "0.18", stroke: "none",
                class: "series-band", "data-series": key, "data-metric": metric,
            }));
        }
        for (const key of keys) {
            const pts = (series.get(key) ?? []).filter((p) => p.epoch >= 1);
            if (pts.length === 0) {
                continue;
            }
            const dynamic = key.split("/")[1];
            parts.push(tag("polyline", {
                points: polylinePoints(pts.map((p) => [sx(p.epoch), sy(p.mean)])),
                fill: "none", stroke: colorOf.get(key)!, "stroke-width": 1.8,
                "stroke-dasharray": dynamic === "PR" ? "6,4" : "none",
                class: "series-mean", "data-series": key, "data-metric": metric,
            }));
        }
    });

    return svgDocument(width, height, parts.join("\n"));
}
