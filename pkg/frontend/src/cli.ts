#!/usr/bin/env node
// qvdp-plot plot <kind> --in FILE... --out FILE [--iso LEVEL]

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";

import { parseResultsCsv } from "./csv.js";
import { parseWignerGrid } from "./wigner.js";
import {
    DEFAULT_STYLE,
    FIGURE_KINDS,
    FigureKind,
    renderAmplitudeTraces,
    renderPhaseDist,
    renderPhaseTrace,
    renderSCurves,
    renderTongue,
    renderWignerPanels,
} from "./render.js";

interface Args {
    kind: FigureKind;
    inputs: string[];
    out: string;
    iso: number;
}

function parseArgs(argv: string[]): Args {
    if (argv[0] !== "plot") throw new Error(`usage: plot <kind> --in FILE... --out FILE`);
    const kind = argv[1] as FigureKind;
    if (!FIGURE_KINDS.includes(kind)) {
        throw new Error(`unknown figure kind ${kind}; choose from ${FIGURE_KINDS.join(", ")}`);
    }
    const inputs: string[] = [];
    let out = "";
    let iso = DEFAULT_STYLE.isoLevel;
    for (let i = 2; i < argv.length; i++) {
        switch (argv[i]) {
            case "--in":
                while (i + 1 < argv.length && !argv[i + 1].startsWith("--")) inputs.push(argv[++i]);
                break;
            case "--out":
                out = argv[++i];
                break;
            case "--iso":
                iso = Number(argv[++i]);
                break;
            default:
                throw new Error(`unknown argument ${argv[i]}`);
        }
    }
    if (inputs.length === 0) throw new Error("need at least one --in file");
    if (!out) throw new Error("need --out FILE");
    return { kind, inputs, out, iso };
}

export function renderJob(args: Args): string {
    const readGrids = () =>
        args.inputs.map((path) => ({
            name: basename(path).replace(/\.txt$/, ""),
            grid: parseWignerGrid(readFileSync(path, "utf-8")),
        }));
    const readRows = () => parseResultsCsv(readFileSync(args.inputs[0], "utf-8"));
    switch (args.kind) {
        case "wigner_panel":
            return renderWignerPanels(readGrids());
        case "phase_dist":
            return renderPhaseDist(readGrids());
        case "amplitude_traces":
            return renderAmplitudeTraces(readRows());
        case "phase_trace":
            return renderPhaseTrace(readRows());
        case "tongue":
            return renderTongue(readRows(), { isoLevel: args.iso });
        case "s_curves":
            return renderSCurves(readRows());
    }
}

export function main(argv: string[]): number {
    let args: Args;
    try {
        args = parseArgs(argv);
    } catch (err) {
        console.error((err as Error).message);
        return 1;
    }
    try {
        const svg = renderJob(args);
        writeFileSync(args.out, svg, "utf-8");
        console.log(`${args.kind} -> ${args.out}`);
        return 0;
    } catch (err) {
        console.error(`render failed: ${(err as Error).message}`);
        return 1;
    }
}

const isDirectRun = process.argv[1] !== undefined && import.meta.url.endsWith(basename(process.argv[1]));
if (isDirectRun) {
    process.exit(main(process.argv.slice(2)));
}
