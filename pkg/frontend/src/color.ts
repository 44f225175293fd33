/** Sequential colormap for scalar fields: dark violet (low) to yellow (high). */

// viridis anchor points, evenly spaced in t
const VIRIDIS: [number, number, number][] = [
    [68, 1, 84],
    [72, 26, 108],
    [71, 47, 125],
    [65, 68, 135],
    [57, 86, 140],
    [49, 104, 142],
    [42, 120, 142],
    [35, 136, 142],
    [31, 152, 139],
    [34, 168, 132],
    [53, 183, 121],
    [84, 197, 104],
    [122, 209, 81],
    [165, 219, 54],
    [210, 226, 27],
    [253, 231, 37],
];

export function viridis(t: number): [number, number, number] {
    const u = Math.max(0, Math.min(1, t));
    const pos = u * (VIRIDIS.length - 1);
    const i = Math.min(Math.floor(pos), VIRIDIS.length - 2);
    const frac = pos - i;
    const a = VIRIDIS[i];
    const b = VIRIDIS[i + 1];
    return [
        Math.round(a[0] + frac * (b[0] - a[0])),
        Math.round(a[1] + frac * (b[1] - a[1])),
        Math.round(a[2] + frac * (b[2] - a[2])),
    ];
}

export function viridisHex(t: number): string {
    const [r, g, b] = viridis(t);
    const hex = (x: number) => x.toString(16).padStart(2, "0");
    return `#${hex(r)}${hex(g)}${hex(b)}`;
}

/** Relative luminance, used by tests to confirm low values render darker. */
export function luminance(rgb: [number, number, number]): number {
    return 0.2126 * rgb[0] + 0.7152 * rgb[1] + 0.0722 * rgb[2];
}

/** Quantile-spaced level edges (n_levels + 1 edges) over sorted sample values. */
export function quantileLevels(values: number[], nLevels: number): number[] {
    const sorted = [...values].sort((a, b) => a - b);
    const edges: number[] = [];
    for (let k = 0; k <= nLevels; k++) {
        const pos = (k / nLevels) * (sorted.length - 1);
        const i = Math.min(Math.floor(pos), sorted.length - 2);
        const frac = pos - i;
        edges.push(sorted[i] + frac * (sorted[i + 1] - sorted[i]));
    }
    return edges;
}

/** Index of the level bucket for a value given quantile edges. */
export function levelIndex(value: number, edges: number[]): number {
    const n = edges.length - 1;
    let lo = 0;
    let hi = n - 1;
    while (lo < hi) {
        const mid = (lo + hi + 1) >> 1;
        if (value >= edges[mid]) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return Math.max(0, Math.min(n - 1, lo));
}
