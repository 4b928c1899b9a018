// Minimal deterministic SVG generation: plain string assembly, fixed number
// formatting, no timestamps or randomness, so identical inputs give
// byte-identical images.

export function fmt(x: number): string {
    if (!Number.isFinite(x)) throw new Error(`cannot format ${x}`);
    if (x === 0) return "0";
    const s = x.toPrecision(6);
    return s.includes(".") || s.includes("e")
        ? s.replace(/\.?0+(e|$)/, "$1").replace(/e\+?(-?)0*(\d)/, "e$1$2")
        : s;
}

export function el(
    tag: string,
    attrs: Record<string, string | number>,
    children: string[] = [],
): string {
    const parts = Object.entries(attrs)
        .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`)
        .join(" ");
    const open = parts.length ? `<${tag} ${parts}>` : `<${tag}>`;
    if (children.length === 0) return open.replace(/>$/, "/>");
    return `${open}${children.join("")}</${tag}>`;
}

export function svgDocument(width: number, height: number, children: string[]): string {
    return (
        `<svg xmlns="http://www.w3.org/2000/svg" width="${fmt(width)}" ` +
        `height="${fmt(height)}" viewBox="0 0 ${fmt(width)} ${fmt(height)}">` +
        `<rect width="${fmt(width)}" height="${fmt(height)}" fill="white"/>` +
        children.join("") +
        `</svg>`
    );
}

export interface Scale {
    (x: number): number;
    domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
    const [d0, d1] = domain;
    const [r0, r1] = range;
    const span = d1 - d0 || 1;
    const scale = ((x: number) => r0 + ((x - d0) / span) * (r1 - r0)) as Scale;
    scale.domain = domain;
    return scale;
}

export function extent(values: number[]): [number, number] {
    let lo = Infinity;
    let hi = -Infinity;
    for (const v of values) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    if (!Number.isFinite(lo)) throw new Error("extent of an empty value list");
    return lo === hi ? [lo - 1, hi + 1] : [lo, hi];
}

export function polyline(points: [number, number][], attrs: Record<string, string | number>): string {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    return el("polyline", { points: pts, fill: "none", ...attrs });
}

/** Annular sector path between radii r0 < r1 and angles a0 < a1 (radians). */
export function annularSector(
    cx: number,
    cy: number,
    r0: number,
    r1: number,
    a0: number,
    a1: number,
): string {
    // screen y grows downward; flip the angle so phi runs counterclockwise
    const p = (r: number, a: number): [number, number] => [
        cx + r * Math.cos(a),
        cy - r * Math.sin(a),
    ];
    const [x0, y0] = p(r1, a0);
    const [x1, y1] = p(r1, a1);
    const [x2, y2] = p(r0, a1);
    const [x3, y3] = p(r0, a0);
    const large = a1 - a0 > Math.PI ? 1 : 0;
    return (
        `M ${fmt(x0)} ${fmt(y0)} ` +
        `A ${fmt(r1)} ${fmt(r1)} 0 ${large} 0 ${fmt(x1)} ${fmt(y1)} ` +
        `L ${fmt(x2)} ${fmt(y2)} ` +
        `A ${fmt(r0)} ${fmt(r0)} 0 ${large} 1 ${fmt(x3)} ${fmt(y3)} Z`
    );
}

function channel(x: number): number {
    return Math.round(255 * Math.min(1, Math.max(0, x)));
}

/** Diverging blue-white-red map on [-1, 1]; Wigner negativity shows blue. */
export function divergingColor(t: number): string {
    const u = Math.min(1, Math.max(-1, t));
    const r = u >= 0 ? 1 : 1 + u * 0.82;
    const g = 1 - Math.abs(u) * 0.78;
    const b = u <= 0 ? 1 : 1 - u * 0.82;
    return `rgb(${channel(r)},${channel(g)},${channel(b)})`;
}

/** Sequential dark-blue -> yellow map on [0, 1] for magnitude grids. */
export function sequentialColor(t: number): string {
    const u = Math.min(1, Math.max(0, t));
    return `rgb(${channel(0.1 + 0.9 * u)},${channel(0.08 + 0.84 * u)},${channel(0.35 - 0.25 * u)})`;
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

export function axisLine(x0: number, y0: number, x1: number, y1: number): string {
    return el("line", { x1: x0, y1: y0, x2: x1, y2: y1, stroke: "#222", "stroke-width": 1 });
}

export function text(
    x: number,
    y: number,
    content: string,
    attrs: Record<string, string | number> = {},
): string {
    return el("text", { x, y, "font-family": "sans-serif", "font-size": 11, fill: "#222", ...attrs }, [
        content,
    ]);
}
