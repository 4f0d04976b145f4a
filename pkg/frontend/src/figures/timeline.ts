import { Table, numeric, requireColumns } from "../csv.js";
import { SvgDoc, drawAxes, fmt, linearScale } from "../svg.js";

const PLOT_W = 620;
const PLOT_H = 260;
const MARGIN = { left: 70, right: 25, top: 45, bottom: 55 };

/** Stepwise SNR trace of the serving beam with switch markers. */
export function renderTimeline(table: Table): string {
  requireColumns(table, ["t_s", "beam", "snr_db", "switch_flag"]);
  const t = table.rows.map((r) => numeric(r, "t_s"));
  const snr = table.rows.map((r) => numeric(r, "snr_db"));
  const beam = table.rows.map((r) => Number(r.beam));
  const switches = table.rows.filter((r) => r.switch_flag === "1").map((r) => numeric(r, "t_s"));

  const doc = new SvgDoc(PLOT_W + MARGIN.left + MARGIN.right, PLOT_H + MARGIN.top + MARGIN.bottom);
  const frame = { x0: MARGIN.left, y0: MARGIN.top, w: PLOT_W, h: PLOT_H };
  const lo = Math.min(...snr);
  const hi = Math.max(...snr);
  const pad = 0.08 * (hi - lo || 1);
  const xs = linearScale(t[0], t[t.length - 1], frame.x0, frame.x0 + frame.w);
  const ys = linearScale(lo - pad, hi + pad, frame.y0 + frame.h, frame.y0);

  // stepwise trace: hold each sample's level until the next sample
  const parts: string[] = [];
  for (let i = 0; i < t.length; i++) {
    parts.push(`${i === 0 ? "M" : "L"}${fmt(xs(t[i]))} ${fmt(ys(snr[i]))}`);
    if (i + 1 < t.length) parts.push(`L${fmt(xs(t[i + 1]))} ${fmt(ys(snr[i]))}`);
  }
  doc.path(parts.join(" "), "#4e79a7", 1.8);

  for (const ts of switches) {
    doc.line(xs(ts), frame.y0, xs(ts), frame.y0 + frame.h, "#e15759", 1, "4,3");
  }

  // label each dwell segment with its serving beam
  let segStart = 0;
  for (let i = 1; i <= t.length; i++) {
    if (i === t.length || beam[i] !== beam[segStart]) {
      const mid = (t[segStart] + t[i - 1]) / 2;
      doc.text(xs(mid), frame.y0 + 14, `beam ${beam[segStart]}`, 10, "middle", "#555555");
      segStart = i;
    }
  }

  drawAxes(doc, frame, xs, ys, "time [s]", "SNR [dB]");
  doc.text(frame.x0 + frame.w / 2, 22,
    `serving-beam SNR over time (${switches.length} switches)`, 13);
  return doc.toString();
}
