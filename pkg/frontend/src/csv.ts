/** Minimal CSV reading for the simulator's output files (no quoting rules). */

export interface Table {
    header: string[];
    rows: string[][];
}

export function parseCsv(text: string): Table {
    const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
    if (lines.length === 0) {
        throw new Error("empty CSV input");
    }
    const header = lines[0].split(",");
    const rows = lines.slice(1).map((line) => line.split(","));
    for (const row of rows) {
        if (row.length !== header.length) {
            throw new Error(`CSV row has ${row.length} cells, header has ${header.length}`);
        }
    }
    return { header, rows };
}

export function requireColumns(table: Table, names: string[], what: string): Map<string, number> {
    const index = new Map<string, number>();
    for (const name of names) {
        const i = table.header.indexOf(name);
        if (i < 0) {
            throw new Error(`${what}: missing required column "${name}" (found: ${table.header.join(", ")})`);
        }
        index.set(name, i);
    }
    return index;
}
