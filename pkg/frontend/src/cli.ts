#!/usr/bin/env node
/** figviz <kind> --in <csv...> --out <svg>
 *
 * kinds:
 *   metrics-panel      one aggregate CSV (policy,dynamic,epoch,metric,mean,std)
 *   simplex-landscape  one landscape CSV (b0,b1,b2,phi) then trajectory CSVs
 */
import { readFileSync, writeFileSync } from "fs";
import { renderMetricsPanel } from "./metricsPanel";
import { renderSimplexLandscape } from "./simplexLandscape";

export interface CliArgs {
    kind: string;
    inputs: string[];
    out: string;
}

export function parseArgs(argv: string[]): CliArgs {
    if (argv.length === 0) {
        throw new Error("usage: figviz <metrics-panel|simplex-landscape> --in <csv...> --out <svg>");
    }
    const kind = argv[0];
    const inputs: string[] = [];
    let out = "";
    let mode: "in" | "out" | null = null;
    for (const arg of argv.slice(1)) {
        if (arg === "--in") {
            mode = "in";
        } else if (arg === "--out") {
            mode = "out";
        } else if (arg.startsWith("--")) {
            throw new Error(`unknown flag ${arg}`);
        } else if (mode === "in") {
            inputs.push(arg);
        } else if (mode === "out") {
            out = arg;
            mode = null;
        } else {
            throw new Error(`unexpected argument ${arg}`);
        }
    }
    if (kind !== "metrics-panel" && kind !== "simplex-landscape") {
        throw new Error(`unknown figure kind ${kind}`);
    }
    if (inputs.length === 0) {
        throw new Error("--in requires at least one CSV path");
    }
    if (out === "") {
        throw new Error("--out requires an output path");
    }
    return { kind, inputs, out };
}

export function runCli(argv: string[]): number {
    let args: CliArgs;
    try {
        args = parseArgs(argv);
    } catch (err) {
        process.stderr.write(`figviz: ${(err as Error).message}\n`);
        return 2;
    }
    try {
        let svg: string;
        if (args.kind === "metrics-panel") {
            if (args.inputs.length !== 1) {
                throw new Error("metrics-panel takes exactly one aggregate CSV");
            }
            svg = renderMetricsPanel({ aggregateCsv: readFileSync(args.inputs[0], "utf8") });
        } else {
            const [gridPath, ...trajPaths] = args.inputs;
            svg = renderSimplexLandscape({
                landscapeCsv: readFileSync(gridPath, "utf8"),
                trajectoryCsvs: trajPaths.map((p) => readFileSync(p, "utf8")),
            });
        }
        writeFileSync(args.out, svg);
        process.stdout.write(`${args.out}\n`);
        return 0;
    } catch (err) {
        process.stderr.write(`figviz: ${(err as Error).message}\n`);
        return 1;
    }
}

if (require.main === module) {
    process.exit(runCli(process.argv.slice(2)));
}
