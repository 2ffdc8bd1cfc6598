/**
 * Server-side SVG rendering of the figure CSVs via echarts.
 *
 * Rendering is read-only: the CSV is never touched and re-rendering the same
 * file reproduces the same image.  Styling is fixed by the table below.
 */

import * as echarts from "echarts";

import { CsvTable, numericColumn, stringColumn } from "./csv";
import { FigureSpec, validateTable } from "./figures";

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#e377c2", "#17becf"];
const MARKERS = ["circle", "rect", "triangle", "diamond", "arrow"];

export interface Series {
  name: string;
  points: Array<[number, number]>;
  dashed: boolean;
}

/** Split rows into series along the grouping columns, in first-seen order. */
export function buildSeries(spec: FigureSpec, table: CsvTable): Series[] {
  const x = numericColumn(table, spec.xColumn);
  const y = numericColumn(table, spec.yColumn);
  const keys = spec.groupBy.map((c) => stringColumn(table, c));
  const analytic = spec.analyticColumn
    ? numericColumn(table, spec.analyticColumn)
    : null;

  const order: string[] = [];
  const byKey = new Map<string, Array<[number, number]>>();
  const analyticByKey = new Map<string, Array<[number, number]>>();
  for (let r = 0; r < table.rows.length; r++) {
    const key = spec.groupBy.length
      ? spec.groupBy.map((c, k) => `${c}=${keys[k][r]}`).join(" ")
      : spec.yLabel;
    if (!byKey.has(key)) {
      order.push(key);
      byKey.set(key, []);
      analyticByKey.set(key, []);
    }
    if (Number.isFinite(y[r])) byKey.get(key)!.push([x[r], y[r]]);
    if (analytic && Number.isFinite(analytic[r])) {
      analyticByKey.get(key)!.push([x[r], analytic[r]]);
    }
  }
  const out: Series[] = [];
  for (const key of order) {
    const points = byKey.get(key)!;
    points.sort((a, b) => a[0] - b[0]);
    out.push({ name: key, points, dashed: false });
  }
  if (analytic) {
    for (const key of order) {
      const points = analyticByKey.get(key)!;
      points.sort((a, b) => a[0] - b[0]);
      out.push({ name: `${key} (closed form)`, points, dashed: true });
    }
  }
  return out;
}

/** Assemble the echarts option; exported separately for testability. */
export function buildChartOption(spec: FigureSpec, table: CsvTable): echarts.EChartsCoreOption {
  validateTable(spec, table);
  const series = buildSeries(spec, table);
  const provenance = [
    `figure=${table.meta.get("figure") ?? spec.id}`,
    `seed=${table.meta.get("seed") ?? "?"}`,
    `ifddsim=${table.meta.get("ifddsim") ?? "?"}`,
  ].join("  ");
  return {
    animation: false,
    backgroundColor: "#ffffff",
    title: { text: spec.title, left: "center", textStyle: { fontSize: 15 } },
    legend: { bottom: 28, type: "plain" },
    grid: { left: 70, right: 30, top: 50, bottom: 90 },
    xAxis: {
      type: spec.xLog ? "log" : "value",
      name: spec.xLabel,
      nameLocation: "middle",
      nameGap: 28,
    },
    yAxis: {
      type: "value",
      name: spec.yLabel,
      nameLocation: "middle",
      nameGap: 45,
      scale: true,
    },
    graphic: [{
      type: "text",
      left: 6,
      bottom: 4,
      style: { text: provenance, fontSize: 9, fill: "#777" },
    }],
    series: series.map((s, i) => ({
      name: s.name,
      type: "line",
      data: s.points,
      symbol: s.dashed ? "none" : MARKERS[i % MARKERS.length],
      symbolSize: 6,
      lineStyle: {
        type: s.dashed ? "dashed" : "solid",
        color: PALETTE[i % PALETTE.length],
        width: s.dashed ? 1.2 : 2,
      },
      itemStyle: { color: PALETTE[i % PALETTE.length] },
    })),
  };
}

export function renderSvg(spec: FigureSpec, table: CsvTable,
                          width = 800, height = 520): string {
  const option = buildChartOption(spec, table);
  const chart = echarts.init(null as never, null, {
    renderer: "svg",
    ssr: true,
    width,
    height,
  });
  try {
    chart.setOption(option);
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}
