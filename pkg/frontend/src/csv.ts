// Parser for the simulator's results.csv emissions.
//
// Layout: sweep-coordinate columns (config units) followed by the fixed
// observable columns. Empty cells mean "absent" (steady-state rows have no
// time; unsynchronized rows have no mean phase).

export const FIXED_COLUMNS = [
    "time_s",
    "S",
    "mean_phase_rad",
    "re_a",
    "im_a",
    "n_mean",
    "purity",
    "wigner_file",
    "error",
] as const;

export interface ResultRow {
    coords: Record<string, number>;
    coordNames: string[];
    time: number | null;
    s: number | null;
    meanPhase: number | null;
    reA: number | null;
    imA: number | null;
    nMean: number | null;
    purity: number | null;
    wignerFile: string | null;
    error: string | null;
}

function num(cell: string): number | null {
    if (cell === "") return null;
    const v = Number(cell);
    if (Number.isNaN(v)) throw new Error(`not a number: ${JSON.stringify(cell)}`);
    return v;
}

export function parseResultsCsv(text: string): ResultRow[] {
    const lines = text.split(/\r?\n/).filter((ln) => ln.trim().length > 0);
    if (lines.length === 0) throw new Error("no rows: the CSV is empty");
    const header = lines[0].split(",");
    const nCoords = header.indexOf("time_s");
    if (nCoords < 0) {
        throw new Error("schema mismatch: expected column time_s");
    }
    const tail = header.slice(nCoords);
    FIXED_COLUMNS.forEach((name, i) => {
        if (tail[i] !== name) {
            throw new Error(`schema mismatch: expected column ${name!}, found ${tail[i] ?? "nothing"}`);
        }
    });
    if (tail.length !== FIXED_COLUMNS.length) {
        throw new Error(`schema mismatch: unexpected trailing column ${tail[FIXED_COLUMNS.length]}`);
    }
    const coordNames = header.slice(0, nCoords);
    if (lines.length === 1) throw new Error("no rows: the CSV has a header but no data");

    return lines.slice(1).map((line) => {
        const cells = line.split(",");
        if (cells.length !== header.length) {
            throw new Error(`row has ${cells.length} cells, header has ${header.length}`);
        }
        const coords: Record<string, number> = {};
        coordNames.forEach((name, i) => {
            coords[name] = Number(cells[i]);
        });
        const f = (i: number) => num(cells[nCoords + i]);
        return {
            coords,
            coordNames: [...coordNames],
            time: f(0),
            s: f(1),
            meanPhase: f(2),
            reA: f(3),
            imA: f(4),
            nMean: f(5),
            purity: f(6),
            wignerFile: cells[nCoords + 7] || null,
            error: cells[nCoords + 8] || null,
        };
    });
}

/** Key identifying a sweep point (all coordinates joined). */
export function coordKey(row: ResultRow): string {
    return row.coordNames.map((n) => `${n}=${row.coords[n]}`).join(",");
}

/** Group rows by sweep point, preserving first-seen order. */
export function groupByCoords(rows: ResultRow[]): Map<string, ResultRow[]> {
    const groups = new Map<string, ResultRow[]>();
    for (const row of rows) {
        const key = coordKey(row);
        const bucket = groups.get(key);
        if (bucket) bucket.push(row);
        else groups.set(key, [row]);
    }
    return groups;
}
