/** Deterministic SVG assembly: fixed number formatting, no timestamps. */

export function fmt(x: number): string {
    if (!Number.isFinite(x)) {
        throw new Error(`non-finite coordinate: ${x}`);
    }
    const s = x.toFixed(3);
    return s === "-0.000" ? "0.000" : s;
}

export function tag(name: string, attrs: Record<string, string | number>, body = ""): string {
    const parts = Object.entries(attrs)
        .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`)
        .join(" ");
    return body === "" ? `<${name} ${parts}/>` : `<${name} ${parts}>${body}</${name}>`;
}

export function polylinePoints(pts: [number, number][]): string {
    return pts.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
}

export function pathFrom(pts: [number, number][], close: boolean): string {
    const d = pts.map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`).join("");
    return close ? d + "Z" : d;
}

export function text(x: number, y: number, body: string, attrs: Record<string, string | number> = {}): string {
    return tag("text", { x, y, ...attrs }, escapeXml(body));
}

export function escapeXml(s: string): string {
    return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function svgDocument(width: number, height: number, body: string): string {
    return (
        `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}">\n${body}\n</svg>\n`
    );
}

/** Nice round tick values covering [lo, hi]. */
export function linearTicks(lo: number, hi: number, target = 5): number[] {
    if (!(hi > lo)) {
        return [lo];
    }
    const rawStep = (hi - lo) / target;
    const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
    const candidates = [1, 2, 5, 10].map((m) => m * mag);
    let step = candidates[0];
    for (const c of candidates) {
        if (Math.abs(c - rawStep) < Math.abs(step - rawStep)) {
            step = c;
        }
    }
    const ticks: number[] = [];
    for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12; v += step) {
        ticks.push(Number(v.toPrecision(12)));
    }
    return ticks;
}

/** Powers of ten within [lo, hi] for a logarithmic axis. */
export function logTicks(lo: number, hi: number): number[] {
    const ticks: number[] = [];
    for (let e = Math.ceil(Math.log10(lo) - 1e-12); Math.pow(10, e) <= hi * (1 + 1e-12); e++) {
        const v = Math.pow(10, e);
        if (v >= lo * (1 - 1e-12)) {
            ticks.push(v);
        }
    }
    return ticks;
}
