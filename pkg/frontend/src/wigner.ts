// Parser for the self-describing "wigner-grid v1" text files plus the
// radial integration that turns W(r, phi) into the phase density P(phi).

export interface WignerGrid {
    rAxis: number[];
    phiAxis: number[];
    values: number[][]; // [iR][iPhi]
    meta: Record<string, number>;
}

export function parseWignerGrid(text: string): WignerGrid {
    const lines = text.split(/\r?\n/);
    if (lines[0] !== "wigner-grid v1") {
        throw new Error("schema mismatch: not a wigner-grid v1 document");
    }
    let nR = -1;
    let nPhi = -1;
    let rAxis: number[] = [];
    let phiAxis: number[] = [];
    const values: number[][] = [];
    const meta: Record<string, number> = {};
    let inValues = false;
    for (const line of lines.slice(1)) {
        if (line.trim() === "") continue;
        if (inValues) {
            values.push(line.trim().split(/\s+/).map(Number));
            continue;
        }
        const sp = line.indexOf(" ");
        const key = sp < 0 ? line : line.slice(0, sp);
        const rest = sp < 0 ? "" : line.slice(sp + 1);
        switch (key) {
            case "n_r":
                nR = Number(rest);
                break;
            case "n_phi":
                nPhi = Number(rest);
                break;
            case "meta": {
                const msp = rest.indexOf(" ");
                meta[rest.slice(0, msp)] = Number(rest.slice(msp + 1));
                break;
            }
            case "r_axis":
                rAxis = rest.trim().split(/\s+/).map(Number);
                break;
            case "phi_axis":
                phiAxis = rest.trim().split(/\s+/).map(Number);
                break;
            case "values":
                inValues = true;
                break;
            default:
                throw new Error(`schema mismatch: unknown wigner-grid field ${key}`);
        }
    }
    if (rAxis.length !== nR || phiAxis.length !== nPhi || values.length !== nR) {
        throw new Error("schema mismatch: wigner-grid axis lengths disagree with header");
    }
    for (const row of values) {
        if (row.length !== nPhi) {
            throw new Error("schema mismatch: wigner-grid row length disagrees with n_phi");
        }
    }
    return { rAxis, phiAxis, values, meta };
}

/** P(phi) = integral of W(r, phi) r dr, trapezoid over the radial axis. */
export function phaseDistribution(grid: WignerGrid): number[] {
    const { rAxis, phiAxis, values } = grid;
    const p = new Array(phiAxis.length).fill(0);
    for (let j = 0; j < phiAxis.length; j++) {
        let acc = 0;
        for (let i = 0; i + 1 < rAxis.length; i++) {
            const fa = values[i][j] * rAxis[i];
            const fb = values[i + 1][j] * rAxis[i + 1];
            acc += 0.5 * (fa + fb) * (rAxis[i + 1] - rAxis[i]);
        }
        p[j] = acc;
    }
    return p;
}
