/** Ternary landscape plot: filled contour bands over the 3-creator simplex
 * with optional trajectory overlays.
 *
 * The grid CSV holds one row per barycentric lattice point (b0, b1, b2, phi)
 * with b = (i, j, k)/R, emitted lexicographically by (i, j). The lattice is
 * filled with its natural triangulation; each small triangle is colored by
 * the quantile band of its mean value, darker meaning smaller. Trajectories
 * are drawn as polylines with a marker on their starting point.
 */
import { levelIndex, quantileLevels, viridisHex } from "./color";
import { parseCsv, requireColumns } from "./csv";
import { pathFrom, polylinePoints, svgDocument, tag, text } from "./svg";

export interface SimplexLandscapeSpec {
    landscapeCsv: string;   // file contents
    trajectoryCsvs?: string[]; // file contents, drawn in order
    width?: number;
    levels?: number;
}

const SQRT3_2 = Math.sqrt(3) / 2;

export function projectBarycentric(b0: number, b1: number, b2: number): [number, number] {
    return [b1 + b2 / 2, SQRT3_2 * b2];
}

interface Grid {
    resolution: number;
    values: number[]; // lexicographic by (i, j)
}

export function readGrid(csvText: string): Grid {
    const table = parseCsv(csvText);
    const idx = requireColumns(table, ["b0", "b1", "b2", "phi"], "landscape input");
    const m = table.rows.length;
    // m = (R+1)(R+2)/2
    const resolution = Math.round((-3 + Math.sqrt(1 + 8 * m)) / 2);
    if (((resolution + 1) * (resolution + 2)) / 2 !== m) {
        throw new Error(`landscape input: ${m} rows do not form a triangular lattice`);
    }
    const values = table.rows.map((row) => Number(row[idx.get("phi")!]));
    if (values.some((v) => !Number.isFinite(v))) {
        throw new Error("landscape input: non-finite potential values");
    }
    return { resolution, values };
}

/** Index of lattice point (i, j) within lexicographic (i, j) ordering. */
function latticeIndex(i: number, j: number, R: number): number {
    // rows for i' < i contribute (R + 1 - i') points each
    return (i * (2 * R + 3 - i)) / 2 + j;
}

export function renderSimplexLandscape(spec: SimplexLandscapeSpec): string {
    const grid = readGrid(spec.landscapeCsv);
    const R = grid.resolution;
    const nLevels = spec.levels ?? 20;
    const width = spec.width ?? 640;
    const margin = 40;
    const side = width - 2 * margin;
    const height = Math.round(side * SQRT3_2) + 2 * margin;

    const toCanvas = (b0: number, b1: number, b2: number): [number, number] => {
        const [x, y] = projectBarycentric(b0, b1, b2);
        return [margin + x * side, height - margin - y * side];
    };

    const edges = quantileLevels(grid.values, nLevels);
    const parts: string[] = [];
    parts.push(tag("rect", { x: 0, y: 0, width, height, fill: "#ffffff" }));

    const pointAt = (i: number, j: number): [number, number] =>
        toCanvas(i / R, j / R, (R - i - j) / R);
    const valueAt = (i: number, j: number): number => grid.values[latticeIndex(i, j, R)];

    const cells: string[] = [];
    for (let i = 0; i < R; i++) {
        for (let j = 0; j < R - i; j++) {
            const up = [pointAt(i, j), pointAt(i + 1, j), pointAt(i, j + 1)] as [number, number][];
            const upVal = (valueAt(i, j) + valueAt(i + 1, j) + valueAt(i, j + 1)) / 3;
            cells.push(tag("path", {
                d: pathFrom(up, true),
                fill: viridisHex(levelIndex(upVal, edges) / (nLevels - 1)),
                stroke: "none", class: "contour-cell",
            }));
            if (j < R - i - 1) {
                const down = [pointAt(i + 1, j), pointAt(i + 1, j + 1), pointAt(i, j + 1)] as [number, number][];
                const downVal = (valueAt(i + 1, j) + valueAt(i + 1, j + 1) + valueAt(i, j + 1)) / 3;
                cells.push(tag("path", {
                    d: pathFrom(down, true),
                    fill: viridisHex(levelIndex(downVal, edges) / (nLevels - 1)),
                    stroke: "none", class: "contour-cell",
                }));
            }
        }
    }
    parts.push(tag("g", { class: "contours", "data-levels": String(nLevels) }, cells.join("")));

    // simplex boundary and vertex labels
    const corners = [toCanvas(1, 0, 0), toCanvas(0, 1, 0), toCanvas(0, 0, 1)];
    parts.push(tag("path", {
        d: pathFrom(corners, true), fill: "none", stroke: "#222222",
        "stroke-width": 1.5, class: "simplex-boundary",
    }));
    const labels: [string, [number, number], number, number][] = [
        ["creator 1", corners[0], -6, 14],
        ["creator 2", corners[1], 6, 14],
        ["creator 3", corners[2], 0, -10],
    ];
    for (const [label, [cx, cy], dx, dy] of labels) {
        parts.push(text(cx + dx, cy + dy, label,
            { "font-size": 12, "font-family": "sans-serif", "text-anchor": "middle" }));
    }

    const trajColors = ["#e41a1c", "#ff7f00", "#f781bf", "#a65628"];
    (spec.trajectoryCsvs ?? []).forEach((csvText, t) => {
        const table = parseCsv(csvText);
        const idx = requireColumns(table, ["b0", "b1", "b2"], `trajectory ${t}`);
        const pts = table.rows.map((row) => toCanvas(
            Number(row[idx.get("b0")!]), Number(row[idx.get("b1")!]), Number(row[idx.get("b2")!])));
        if (pts.length === 0) {
            throw new Error(`trajectory ${t}: no rows`);
        }
        const color = trajColors[t % trajColors.length];
        parts.push(tag("polyline", {
            points: polylinePoints(pts), fill: "none", stroke: color,
            "stroke-width": 1.8, class: "trajectory", "data-index": String(t),
        }));
        parts.push(tag("circle", {
            cx: pts[0][0], cy: pts[0][1], r: 4, fill: color,
            stroke: "#ffffff", "stroke-width": 1, class: "trajectory-start", "data-index": String(t),
        }));
    });

    return svgDocument(width, height, parts.join("\n"));
}
