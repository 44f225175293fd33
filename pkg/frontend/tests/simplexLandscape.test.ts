import { readFileSync } from "fs";
import { join } from "path";
import { describe, expect, it } from "vitest";
import { projectBarycentric, readGrid, renderSimplexLandscape } from "../src/simplexLandscape";

const FIXTURES = join(__dirname, "fixtures");
const landscape = readFileSync(join(FIXTURES, "landscape.csv"), "utf8");
const trajectories = [0, 1, 2].map((i) =>
    readFileSync(join(FIXTURES, `trajectory-${i}.csv`), "utf8"));

function count(haystack: string, needle: string): number {
    return haystack.split(needle).length - 1;
}

function constantGrid(R: number, value = 1.5): string {
    const lines = ["b0,b1,b2,phi"];
    for (let i = 0; i <= R; i++) {
        for (let j = 0; j <= R - i; j++) {
            lines.push(`${i / R},${j / R},${(R - i - j) / R},${value}`);
        }
    }
    return lines.join("\n") + "\n";
}

describe("barycentric projection", () => {
    it("maps simplex vertices to triangle corners exactly", () => {
        expect(projectBarycentric(1, 0, 0)).toEqual([0, 0]);
        expect(projectBarycentric(0, 1, 0)).toEqual([1, 0]);
        expect(projectBarycentric(0, 0, 1)).toEqual([0.5, Math.sqrt(3) / 2]);
    });
});

describe("grid reading", () => {
    it("infers the lattice resolution", () => {
        expect(readGrid(landscape).resolution).toBe(60);
    });

    it("rejects row counts that are not triangular", () => {
        const bad = "b0,b1,b2,phi\n0,0,1,1\n0,1,0,1\n1,0,0,1\n0.5,0.5,0,1\n";
        expect(() => readGrid(bad)).toThrow(/triangular lattice/);
    });
});

describe("simplex landscape", () => {
    it("fills the lattice with contour cells and overlays 3 trajectories", () => {
        const svg = renderSimplexLandscape({ landscapeCsv: landscape, trajectoryCsvs: trajectories });
        expect(count(svg, 'class="contour-cell"')).toBe(60 * 60);
        expect(count(svg, 'class="trajectory"')).toBe(3);
        expect(count(svg, 'class="trajectory-start"')).toBe(3);
        expect(svg).toContain('class="simplex-boundary"');
        expect(svg).toContain('data-levels="20"');
    });

    it("renders byte-identical output on rerun", () => {
        const a = renderSimplexLandscape({ landscapeCsv: landscape, trajectoryCsvs: trajectories });
        const b = renderSimplexLandscape({ landscapeCsv: landscape, trajectoryCsvs: trajectories });
        expect(Buffer.from(a).equals(Buffer.from(b))).toBe(true);
    });

    it("paints a constant field in a single color", () => {
        const svg = renderSimplexLandscape({ landscapeCsv: constantGrid(8) });
        const fills = new Set(
            [...svg.matchAll(/class="contour-cell"[^/]*/g)]
                .map(() => "")  // placeholder, fills extracted below
        );
        const cellFills = new Set(
            [...svg.matchAll(/<path d="[^"]*" fill="(#[0-9a-f]{6})" stroke="none" class="contour-cell"\/>/g)]
                .map((m) => m[1]));
        expect(cellFills.size).toBe(1);
        expect(fills.size).toBeLessThanOrEqual(1);
    });

    it("draws darker cells at smaller values", () => {
        // two-level ramp: half the triangle low, half high
        const R = 6;
        const lines = ["b0,b1,b2,phi"];
        for (let i = 0; i <= R; i++) {
            for (let j = 0; j <= R - i; j++) {
                lines.push(`${i / R},${j / R},${(R - i - j) / R},${i < R / 2 ? 0 : 10}`);
            }
        }
        const svg = renderSimplexLandscape({ landscapeCsv: lines.join("\n") });
        const fills = [...svg.matchAll(/fill="(#[0-9a-f]{6})" stroke="none" class="contour-cell"/g)]
            .map((m) => m[1]);
        const lum = (hex: string) =>
            0.2126 * parseInt(hex.slice(1, 3), 16)
            + 0.7152 * parseInt(hex.slice(3, 5), 16)
            + 0.0722 * parseInt(hex.slice(5, 7), 16);
        const lums = fills.map(lum);
        expect(Math.min(...lums)).toBeLessThan(Math.max(...lums));
        // the first cells (low values) must be darker than the last (high values)
        expect(lum(fills[0])).toBeLessThan(lum(fills[fills.length - 1]));
    });

    it("rejects trajectories without barycentric columns", () => {
        expect(() => renderSimplexLandscape({
            landscapeCsv: constantGrid(4),
            trajectoryCsvs: ["epoch,x,y\n0,1,2\n"],
        })).toThrow(/missing required column/);
    });
});
