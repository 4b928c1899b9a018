// The six figure kinds, each a pure function from parsed inputs to an SVG
// string. Axis ranges always derive from the data.

import { ResultRow, groupByCoords } from "./csv.js";
import { WignerGrid, phaseDistribution } from "./wigner.js";
import {
    PALETTE,
    Scale,
    annularSector,
    axisLine,
    divergingColor,
    el,
    extent,
    fmt,
    linearScale,
    polyline,
    sequentialColor,
    svgDocument,
    text,
} from "./svg.js";

export const FIGURE_KINDS = [
    "wigner_panel",
    "amplitude_traces",
    "phase_trace",
    "phase_dist",
    "tongue",
    "s_curves",
] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface StyleOptions {
    isoLevel: number;
}

export const DEFAULT_STYLE: StyleOptions = { isoLevel: 0.5 };

const PANEL = 260;
const MARGIN = 46;

// --- wigner_panel -----------------------------------------------------------

export function renderWignerPanels(grids: { name: string; grid: WignerGrid }[]): string {
    if (grids.length === 0) throw new Error("no rows: need at least one wigner grid");
    const width = MARGIN + grids.length * (PANEL + MARGIN);
    const height = PANEL + 2 * MARGIN;
    const children: string[] = [];
    grids.forEach(({ name, grid }, index) => {
        const cx = MARGIN + index * (PANEL + MARGIN) + PANEL / 2;
        const cy = MARGIN + PANEL / 2;
        const rMax = grid.rAxis[grid.rAxis.length - 1];
        const toPx = (PANEL / 2) / rMax;
        let vMax = 0;
        for (const row of grid.values) for (const v of row) vMax = Math.max(vMax, Math.abs(v));
        if (vMax === 0) vMax = 1;
        const cells: string[] = [];
        const nPhi = grid.phiAxis.length;
        const dPhi = (2 * Math.PI) / nPhi;
        for (let i = 0; i + 1 < grid.rAxis.length; i++) {
            for (let j = 0; j < nPhi; j++) {
                const value = 0.5 * (grid.values[i][j] + grid.values[i + 1][j]);
                const d = annularSector(
                    cx,
                    cy,
                    grid.rAxis[i] * toPx,
                    grid.rAxis[i + 1] * toPx,
                    grid.phiAxis[j],
                    grid.phiAxis[j] + dPhi,
                );
                cells.push(el("path", { class: "cell", d, fill: divergingColor(value / vMax), stroke: "none" }));
            }
        }
        const overlays: string[] = [];
        if (grid.meta.r_classical !== undefined && grid.meta.r_classical <= rMax) {
            overlays.push(
                el("circle", {
                    class: "classical-radius",
                    cx,
                    cy,
                    r: grid.meta.r_classical * toPx,
                    fill: "none",
                    stroke: "#888",
                    "stroke-width": 1.4,
                }),
            );
        }
        if (grid.meta.ring_radius !== undefined) {
            overlays.push(
                el("circle", {
                    class: "quantum-radius",
                    cx,
                    cy,
                    r: grid.meta.ring_radius * toPx,
                    fill: "none",
                    stroke: "#000",
                    "stroke-width": 1.4,
                    "stroke-dasharray": "5,4",
                }),
            );
        }
        children.push(
            el("g", { class: "panel" }, [
                ...cells,
                ...overlays,
                el("circle", { cx, cy, r: PANEL / 2, fill: "none", stroke: "#222", "stroke-width": 1 }),
                text(cx, MARGIN - 10, name, { "text-anchor": "middle" }),
                text(cx + PANEL / 2, cy + 14, `r=${fmt(rMax)}`, { "text-anchor": "end", "font-size": 9 }),
            ]),
        );
    });
    return svgDocument(width, height, children);
}

// --- shared cartesian frame -------------------------------------------------

interface Frame {
    x: Scale;
    y: Scale;
    body: string[];
}

function frame(
    xDomain: [number, number],
    yDomain: [number, number],
    xLabel: string,
    yLabel: string,
    width = 460,
    height = 300,
): { frame: Frame; finish: (children: string[]) => string } {
    const x = linearScale(xDomain, [MARGIN + 12, width - 16]);
    const y = linearScale(yDomain, [height - MARGIN, 18]);
    const axes = [
        axisLine(x(xDomain[0]), y(yDomain[0]), x(xDomain[1]), y(yDomain[0])),
        axisLine(x(xDomain[0]), y(yDomain[0]), x(xDomain[0]), y(yDomain[1])),
        text(x(xDomain[0]), y(yDomain[0]) + 14, fmt(xDomain[0])),
        text(x(xDomain[1]), y(yDomain[0]) + 14, fmt(xDomain[1]), { "text-anchor": "end" }),
        text(x(xDomain[0]) - 4, y(yDomain[0]), fmt(yDomain[0]), { "text-anchor": "end" }),
        text(x(xDomain[0]) - 4, y(yDomain[1]) + 4, fmt(yDomain[1]), { "text-anchor": "end" }),
        text((x(xDomain[0]) + x(xDomain[1])) / 2, height - 8, xLabel, { "text-anchor": "middle" }),
        text(12, 12, yLabel),
    ];
    return {
        frame: { x, y, body: axes },
        finish: (children) => svgDocument(width, height, [...axes, ...children]),
    };
}

function timeResolved(rows: ResultRow[]): ResultRow[] {
    const timed = rows.filter((r) => r.time !== null && r.error === null);
    if (timed.length === 0) throw new Error("no rows: no time-resolved data points");
    return timed;
}

// --- amplitude_traces -------------------------------------------------------

export function renderAmplitudeTraces(rows: ResultRow[]): string {
    const timed = timeResolved(rows).filter((r) => r.reA !== null);
    const groups = [...groupByCoords(timed).entries()];
    const times = timed.map((r) => (r.time as number) * 1e3);
    const amps = timed.flatMap((r) => [r.reA as number, r.imA as number]);
    const { frame: fr, finish } = frame(extent(times), extent(amps), "t [ms]", "Re<a>, Im<a>");
    const children: string[] = [];
    groups.forEach(([key, group], index) => {
        const color = PALETTE[index % PALETTE.length];
        const re: [number, number][] = group.map((r) => [fr.x((r.time as number) * 1e3), fr.y(r.reA as number)]);
        const im: [number, number][] = group.map((r) => [fr.x((r.time as number) * 1e3), fr.y(r.imA as number)]);
        children.push(polyline(re, { class: "trace", stroke: color, "stroke-width": 1.6 }));
        children.push(
            polyline(im, { class: "trace", stroke: color, "stroke-width": 1.6, "stroke-dasharray": "4,3" }),
        );
        children.push(text(fr.x(fr.x.domain[1]) - 4, 16 + 12 * index, key || "run", { "text-anchor": "end", fill: color }));
    });
    return finish(children);
}

// --- phase_trace ------------------------------------------------------------

export function renderPhaseTrace(rows: ResultRow[]): string {
    const timed = timeResolved(rows).filter((r) => r.meanPhase !== null);
    if (timed.length === 0) throw new Error("no rows: no phase samples");
    const groups = [...groupByCoords(timed).entries()];
    const times = timed.map((r) => (r.time as number) * 1e3);
    const phases = timed.map((r) => r.meanPhase as number);
    const { frame: fr, finish } = frame(extent(times), extent(phases), "t [ms]", "<phi> [rad]");
    const children: string[] = [];
    if (groups.length > 1) {
        // envelope across groups at shared sample times
        const byTime = new Map<number, number[]>();
        for (const r of timed) {
            const key = r.time as number;
            const bucket = byTime.get(key) ?? [];
            bucket.push(r.meanPhase as number);
            byTime.set(key, bucket);
        }
        const ts = [...byTime.keys()].sort((a, b) => a - b);
        const upper: [number, number][] = ts.map((t) => [fr.x(t * 1e3), fr.y(Math.max(...byTime.get(t)!))]);
        const lower: [number, number][] = ts.map((t) => [fr.x(t * 1e3), fr.y(Math.min(...byTime.get(t)!))]);
        const d =
            "M " +
            upper.map(([x, y]) => `${fmt(x)} ${fmt(y)}`).join(" L ") +
            " L " +
            lower.reverse().map(([x, y]) => `${fmt(x)} ${fmt(y)}`).join(" L ") +
            " Z";
        children.push(el("path", { class: "band", d, fill: "#aecbe8", stroke: "none", opacity: 0.6 }));
    }
    groups.forEach(([, group], index) => {
        const pts: [number, number][] = group.map((r) => [
            fr.x((r.time as number) * 1e3),
            fr.y(r.meanPhase as number),
        ]);
        children.push(polyline(pts, { class: "trace", stroke: PALETTE[index % PALETTE.length], "stroke-width": 1.6 }));
    });
    return finish(children);
}

// --- phase_dist -------------------------------------------------------------

export function renderPhaseDist(grids: { name: string; grid: WignerGrid }[]): string {
    if (grids.length === 0) throw new Error("no rows: need at least one wigner grid");
    const dists = grids.map(({ name, grid }) => ({ name, phi: grid.phiAxis, p: phaseDistribution(grid) }));
    const allP = dists.flatMap((d) => d.p);
    const { frame: fr, finish } = frame([0, 2 * Math.PI], [Math.min(0, ...allP), Math.max(...allP)], "phi [rad]", "P(phi)");
    const children: string[] = [];
    dists.forEach(({ name, phi, p }, index) => {
        const pts: [number, number][] = phi.map((v, i) => [fr.x(v), fr.y(p[i])]);
        pts.push([fr.x(2 * Math.PI), fr.y(p[0])]); // close the period
        const color = PALETTE[index % PALETTE.length];
        children.push(polyline(pts, { class: "curve", stroke: color, "stroke-width": 1.6 }));
        children.push(text(fr.x(fr.x.domain[1]) - 4, 16 + 12 * index, name, { "text-anchor": "end", fill: color }));
    });
    return finish(children);
}

// --- tongue -----------------------------------------------------------------

export function renderTongue(rows: ResultRow[], style: StyleOptions): string {
    const clean = rows.filter((r) => r.error === null);
    if (clean.length === 0) throw new Error("no rows: the CSV is empty or all points failed");
    const omegaKey = "omega_hz_over_2pi";
    const deltaKey = "delta_hz_over_2pi";
    for (const key of [omegaKey, deltaKey]) {
        if (!(key in clean[0].coords)) throw new Error(`schema mismatch: expected column ${key}`);
    }
    const sByPoint = new Map<string, number>();
    for (const r of clean) sByPoint.set(`${r.coords[omegaKey]}|${r.coords[deltaKey]}`, r.s as number);
    const omegas = [...new Set(clean.map((r) => r.coords[omegaKey]))].sort((a, b) => a - b);
    const deltas = [...new Set(clean.map((r) => r.coords[deltaKey]))].sort((a, b) => a - b);
    for (const o of omegas)
        for (const d of deltas)
            if (!sByPoint.has(`${o}|${d}`)) throw new Error(`incomplete grid: missing point (${o}, ${d})`);

    const width = 460;
    const height = 320;
    const x = linearScale([0, deltas.length], [MARGIN + 12, width - 70]);
    const y = linearScale([0, omegas.length], [height - MARGIN, 18]);
    const children: string[] = [];
    for (let i = 0; i < omegas.length; i++) {
        for (let j = 0; j < deltas.length; j++) {
            const s = sByPoint.get(`${omegas[i]}|${deltas[j]}`)!;
            children.push(
                el("rect", {
                    class: "cell",
                    x: x(j),
                    y: y(i + 1),
                    width: x(j + 1) - x(j),
                    height: y(i) - y(i + 1),
                    fill: sequentialColor(s),
                }),
            );
        }
    }
    // iso-level boundary: interpolated crossings per drive row
    const left: [number, number][] = [];
    const right: [number, number][] = [];
    for (let i = 0; i < omegas.length; i++) {
        const s = deltas.map((d) => sByPoint.get(`${omegas[i]}|${d}`)!);
        const jMax = s.indexOf(Math.max(...s));
        if (s[jMax] < style.isoLevel) continue;
        let lj = 0;
        for (let j = jMax; j > 0; j--) {
            if (s[j - 1] < style.isoLevel && style.isoLevel <= s[j]) {
                lj = j - 1 + (style.isoLevel - s[j - 1]) / (s[j] - s[j - 1]);
                break;
            }
        }
        let rj = deltas.length - 1;
        for (let j = jMax; j + 1 < deltas.length; j++) {
            if (s[j + 1] < style.isoLevel && style.isoLevel <= s[j]) {
                rj = j + (s[j] - style.isoLevel) / (s[j] - s[j + 1]);
                break;
            }
        }
        left.push([x(lj + 0.5), y(i + 0.5)]);
        right.push([x(rj + 0.5), y(i + 0.5)]);
    }
    if (left.length > 1) {
        children.push(polyline(left, { class: "contour", stroke: "#fff", "stroke-width": 2, "stroke-dasharray": "6,3" }));
        children.push(polyline(right, { class: "contour", stroke: "#fff", "stroke-width": 2, "stroke-dasharray": "6,3" }));
    }
    // color bar
    for (let k = 0; k < 40; k++) {
        children.push(
            el("rect", {
                x: width - 48,
                y: y(0) - ((k + 1) * (y(0) - 18)) / 40,
                width: 12,
                height: (y(0) - 18) / 40 + 0.5,
                fill: sequentialColor((k + 0.5) / 40),
            }),
        );
    }
    children.push(text(width - 30, 24, "S=1"));
    children.push(text(width - 30, y(0), "S=0"));
    children.push(text((x(0) + x(deltas.length)) / 2, height - 8, "detuning [Hz]", { "text-anchor": "middle" }));
    children.push(text(12, 12, "drive [Hz]"));
    deltas.forEach((d, j) => children.push(text(x(j + 0.5), y(0) + 14, fmt(d), { "text-anchor": "middle", "font-size": 9 })));
    omegas.forEach((o, i) => children.push(text(x(0) - 4, y(i + 0.5) + 3, fmt(o), { "text-anchor": "end", "font-size": 9 })));
    return svgDocument(width, height, children);
}

// --- s_curves ---------------------------------------------------------------

export function renderSCurves(rows: ResultRow[]): string {
    const clean = rows.filter((r) => r.error === null && r.s !== null);
    if (clean.length === 0) throw new Error("no rows: the CSV is empty or all points failed");
    const names = clean[0].coordNames;
    if (names.length === 0) throw new Error("schema mismatch: S curves need sweep coordinates");
    const xName = names[names.length - 1];
    const groupNames = names.slice(0, -1);
    const keyOf = (r: ResultRow) => groupNames.map((n) => `${n}=${r.coords[n]}`).join(",") || "scan";
    const groups = new Map<string, ResultRow[]>();
    for (const r of clean) {
        const key = keyOf(r);
        const bucket = groups.get(key) ?? [];
        bucket.push(r);
        groups.set(key, bucket);
    }
    const xs = clean.map((r) => r.coords[xName]);
    const { frame: fr, finish } = frame(extent(xs), [0, 1], xName, "S");
    const children: string[] = [];
    [...groups.entries()].forEach(([key, group], index) => {
        const sorted = [...group].sort((a, b) => a.coords[xName] - b.coords[xName]);
        const color = PALETTE[index % PALETTE.length];
        const pts: [number, number][] = sorted.map((r) => [fr.x(r.coords[xName]), fr.y(r.s as number)]);
        children.push(polyline(pts, { class: "curve", stroke: color, "stroke-width": 1.6 }));
        for (const [px, py] of pts) {
            children.push(el("circle", { class: "point", cx: px, cy: py, r: 2.6, fill: color }));
        }
        children.push(text(fr.x(fr.x.domain[1]) - 4, 16 + 12 * index, key, { "text-anchor": "end", fill: color }));
    });
    return finish(children);
}
