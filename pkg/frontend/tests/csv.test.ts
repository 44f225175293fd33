import { describe, expect, it } from "vitest";
import { parseCsv, requireColumns } from "../src/csv";

describe("parseCsv", () => {
    it("splits header and rows", () => {
        const t = parseCsv("a,b\n1,2\n3,4\n");
        expect(t.header).toEqual(["a", "b"]);
        expect(t.rows).toEqual([["1", "2"], ["3", "4"]]);
    });

    it("rejects ragged rows", () => {
        expect(() => parseCsv("a,b\n1\n")).toThrow(/cells/);
    });

    it("rejects empty input", () => {
        expect(() => parseCsv("")).toThrow(/empty/);
    });

    it("tolerates trailing newline and CRLF", () => {
        const t = parseCsv("a,b\r\n1,2\r\n");
        expect(t.rows).toEqual([["1", "2"]]);
    });
});

describe("requireColumns", () => {
    it("maps names to indices", () => {
        const t = parseCsv("x,y,z\n1,2,3\n");
        const idx = requireColumns(t, ["z", "x"], "test");
        expect(idx.get("z")).toBe(2);
        expect(idx.get("x")).toBe(0);
    });

    it("describes missing columns", () => {
        const t = parseCsv("x,y\n1,2\n");
        expect(() => requireColumns(t, ["phi"], "landscape input")).toThrow(/missing required column "phi"/);
    });
});
