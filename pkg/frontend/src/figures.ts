/**
 * Figure schemas: which CSV columns each figure expects, how its axes are
 * scaled and labeled, and which columns group rows into series.
 */

import { CsvFormatError, CsvTable } from "./csv";

export interface FigureSpec {
  id: string;
  title: string;
  /** exact column set the CSV must carry */
  columns: string[];
  xColumn: string;
  yColumn: string;
  xLabel: string;
  yLabel: string;
  xLog: boolean;
  /** rows sharing a value tuple over these columns form one series */
  groupBy: string[];
  /** extra dashed reference series drawn from this column, if present */
  analyticColumn?: string;
}

export const FIGURES: Record<string, FigureSpec> = {
  fig3: {
    id: "fig3",
    title: "Channel correlation between adjacent subcarriers",
    columns: ["n_sub", "channel_order", "delta_h", "delta_h_analytic"],
    xColumn: "n_sub",
    yColumn: "delta_h",
    xLabel: "number of subcarriers",
    yLabel: "delta_h",
    xLog: true,
    groupBy: ["channel_order"],
    analyticColumn: "delta_h_analytic",
  },
  fig5: {
    id: "fig5",
    title: "Average SIR versus normalized carrier frequency offset",
    columns: ["f_off_over_fsub", "sir_db"],
    xColumn: "f_off_over_fsub",
    yColumn: "sir_db",
    xLabel: "f_off / f_sub",
    yLabel: "SIR [dB]",
    xLog: true,
    groupBy: [],
  },
  fig6: {
    id: "fig6",
    title: "Achievable SQNR for uplink pilots versus BS antennas",
    columns: ["n_antennas", "rho_db", "sqnr_db"],
    xColumn: "n_antennas",
    yColumn: "sqnr_db",
    xLabel: "number of BS antennas",
    yLabel: "SQNR [dB]",
    xLog: true,
    groupBy: ["rho_db"],
  },
  fig11: {
    id: "fig11",
    title: "Achievable rate versus pilot rate",
    columns: [
      "mode", "pilot_rate", "n_antennas", "doppler_hz", "speed_kmh",
      "snr_db", "rate_bps_hz", "rate_std", "mi_bpcu", "ber", "n_bits",
      "n_frames", "n_seeds", "seed", "flagged", "note",
    ],
    xColumn: "pilot_rate",
    yColumn: "rate_bps_hz",
    xLabel: "pilot rate p",
    yLabel: "rate [bits/s/Hz]",
    xLog: false,
    groupBy: ["mode", "speed_kmh"],
  },
  fig12: {
    id: "fig12",
    title: "Achievable rate versus speed",
    columns: [
      "mode", "pilot_rate", "n_antennas", "doppler_hz", "speed_kmh",
      "snr_db", "rate_bps_hz", "rate_std", "mi_bpcu", "ber", "n_bits",
      "n_frames", "n_seeds", "seed", "flagged", "note",
    ],
    xColumn: "speed_kmh",
    yColumn: "rate_bps_hz",
    xLabel: "speed [km/h]",
    yLabel: "rate [bits/s/Hz]",
    xLog: false,
    groupBy: ["mode", "pilot_rate"],
  },
};

export function figureSpec(id: string): FigureSpec {
  const spec = FIGURES[id];
  if (!spec) {
    throw new CsvFormatError(
      `unknown figure '${id}'; expected one of ${Object.keys(FIGURES).join(", ")}`,
    );
  }
  return spec;
}

/**
 * Refuse CSVs that do not carry the self-describing config header or whose
 * columns differ from the figure schema.
 */
export function validateTable(spec: FigureSpec, table: CsvTable): void {
  const hasConfig = [...table.meta.keys()].some((k) => k.startsWith("config."));
  if (!hasConfig) {
    throw new CsvFormatError("CSV lacks the embedded config header comments");
  }
  const got = table.columns.join(",");
  const want = spec.columns.join(",");
  if (got !== want) {
    const missing = spec.columns.filter((c) => !table.columns.includes(c));
    const extra = table.columns.filter((c) => !spec.columns.includes(c));
    throw new CsvFormatError(
      `columns do not match the ${spec.id} schema` +
      (missing.length ? `; missing: ${missing.join(", ")}` : "") +
      (extra.length ? `; unexpected: ${extra.join(", ")}` : ""),
    );
  }
  if (table.rows.length === 0) {
    throw new CsvFormatError("CSV contains no data rows");
  }
  const declared = table.meta.get("figure");
  if (declared !== undefined && declared !== spec.id) {
    throw new CsvFormatError(
      `CSV declares figure=${declared}, asked to render ${spec.id}`,
    );
  }
}
