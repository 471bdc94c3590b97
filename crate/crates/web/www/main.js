import init, { plateau_profile, gelfand_curve, weight_shells } from "./pkg/lab_web.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

// series: [{label, xs, ys, dashed?}]
function plot(canvas, series, { logY = false } = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = { l: 60, r: 12, t: 12, b: 28 };
  ctx.clearRect(0, 0, w, h);
  const tf = (y) => (logY ? Math.log10(y) : y);
  const xs = series.flatMap((s) => s.xs);
  const ys = series.flatMap((s) => s.ys.map(tf)).filter(Number.isFinite);
  let [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (x1 === x0) x1 = x0 + 1;
  if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
  const margin = 0.05 * (y1 - y0);
  y0 -= margin; y1 += margin;
  const px = (x) => pad.l + ((x - x0) / (x1 - x0)) * (w - pad.l - pad.r);
  const py = (y) => h - pad.b - ((tf(y) - y0) / (y1 - y0)) * (h - pad.t - pad.b);

  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.strokeRect(pad.l, pad.t, w - pad.l - pad.r, h - pad.t - pad.b);
  for (let i = 0; i <= 4; i++) {
    const v = y0 + ((y1 - y0) * i) / 4;
    const y = h - pad.b - ((v - y0) / (y1 - y0)) * (h - pad.t - pad.b);
    ctx.fillText(logY ? `1e${v.toFixed(1)}` : v.toPrecision(3), 4, y + 4);
    const xv = x0 + ((x1 - x0) * i) / 4;
    ctx.fillText(xv.toPrecision(3), px(xv) - 10, h - 8);
  }
  series.forEach((s, i) => {
    ctx.strokeStyle = COLORS[i % COLORS.length];
    ctx.setLineDash(s.dashed ? [5, 4] : []);
    ctx.beginPath();
    s.xs.forEach((x, j) => (j ? ctx.lineTo(px(x), py(s.ys[j])) : ctx.moveTo(px(x), py(s.ys[j]))));
    ctx.stroke();
    ctx.fillStyle = ctx.strokeStyle;
    ctx.fillText(s.label, w - pad.r - 170, pad.t + 14 * (i + 1));
  });
  ctx.setLineDash([]);
}

function guarded(outId, fn) {
  return () => {
    const out = $(outId);
    out.classList.remove("err");
    try {
      fn(out);
    } catch (e) {
      out.classList.add("err");
      out.textContent = String(e);
    }
  };
}

const drawPlateau = guarded("pl-out", (out) => {
  const r = JSON.parse(plateau_profile(num("pl-p"), num("pl-q"), num("pl-eps"), num("pl-gamma"), 1024));
  plot($("pl-canvas"), [{ label: "φ(x)", xs: r.x, ys: r.y }]);
  out.textContent =
    `stored coefficients |n| ≤ ${r.range}, certified ℓ¹ tail ${r.tail_l1.toExponential(2)}\n` +
    `max |φ − 1| on the plateau ${r.inside_dev.toExponential(2)}, max |φ| off the support ${r.outside_max.toExponential(2)}`;
});

const drawGelfand = guarded("gf-out", (out) => {
  const r = JSON.parse(
    gelfand_curve($("gf-orders").value, num("gf-level"), $("gf-young").value, num("gf-seed"), num("gf-kmax")),
  );
  const ks = r.l1.map((_, k) => k);
  plot($("gf-canvas"), [
    { label: "L¹", xs: ks, ys: r.l1 },
    { label: "weighted Orlicz", xs: ks, ys: r.orlicz },
    { label: "spectral radius", xs: ks, ys: ks.map(() => r.radius), dashed: true },
  ]);
  const last = (v) => v[v.length - 1];
  const rel = (v) => Math.abs(last(v) - r.radius) / r.radius;
  out.textContent =
    `ν(f) = ${r.radius.toPrecision(8)}\n` +
    `k = ${last(ks)}: L¹ ${last(r.l1).toPrecision(8)} (rel ${rel(r.l1).toExponential(2)}), ` +
    `Orlicz ${last(r.orlicz).toPrecision(8)} (rel ${rel(r.orlicz).toExponential(2)})`;
});

const drawWeights = guarded("wt-out", (out) => {
  const r = JSON.parse(weight_shells($("wt-orders").value, $("wt-values").value, num("wt-p"), num("wt-n")));
  const ns = r.grs.map((_, i) => i + 1);
  plot($("wt-canvas"), [
    { label: "ω♯_p(xⁿ)^(1/n)", xs: ns, ys: r.grs },
    { label: "C^(1/n)", xs: ns, ys: r.grs_bound, dashed: true },
  ]);
  const fmt = (v) => v.map((a) => a.toPrecision(4)).join(", ");
  out.textContent =
    `ω shells   ${fmt(r.omega)}\nω♯ shells  ${fmt(r.sharpen)}\nω♯_p shells ${fmt(r.sharpen_p)}\n` +
    `generator order ${r.order}`;
});

await init();
$("pl-go").onclick = drawPlateau;
$("gf-go").onclick = drawGelfand;
$("wt-go").onclick = drawWeights;
drawPlateau();
drawGelfand();
drawWeights();
