import init, { sweep, point, crossover, default_scenario } from "./pkg/qkdlink_web.js";

const COLORS = { bb84: "#1f77b4", b92: "#d62728", bbm92: "#2ca02c", e91: "#9467bd", eta: "#333" };
const $ = (id) => document.getElementById(id);

function overrides() {
  return JSON.stringify({
    mu: Number($("mu").value),
    dr: Number($("dr").value),
    V0: Number($("v").value),
    d: 10 ** Number($("d").value),
  });
}

function fmt(x) {
  if (x === null || x === undefined) return "n/a";
  if (x === 0) return "0";
  return Math.abs(x) >= 1e-3 && Math.abs(x) < 1e4 ? x.toPrecision(4) : x.toExponential(3);
}

function plot(canvas, theta, series, { log, marker }) {
  const dpr = window.devicePixelRatio || 1;
  const w = canvas.clientWidth, h = canvas.clientHeight;
  canvas.width = w * dpr;
  canvas.height = h * dpr;
  const ctx = canvas.getContext("2d");
  ctx.scale(dpr, dpr);
  ctx.clearRect(0, 0, w, h);

  const pad = { l: 56, r: 10, t: 10, b: 28 };
  const tf = log ? (v) => (v > 0 ? Math.log10(v) : null) : (v) => v;
  const values = series.flatMap((s) => s.data.map(tf)).filter((v) => v !== null && Number.isFinite(v));
  if (!values.length) return;
  let lo = Math.min(...values), hi = Math.max(...values);
  if (log) { lo = Math.floor(lo); hi = Math.ceil(hi); }
  if (hi === lo) hi = lo + 1;
  const x = (t) => pad.l + ((t - theta[0]) / (theta[theta.length - 1] - theta[0] || 1)) * (w - pad.l - pad.r);
  const y = (v) => h - pad.b - ((v - lo) / (hi - lo)) * (h - pad.t - pad.b);

  ctx.strokeStyle = "#ccc";
  ctx.fillStyle = "#555";
  ctx.font = "11px system-ui";
  const ticks = log ? Math.min(hi - lo, 8) : 5;
  for (let i = 0; i <= ticks; i++) {
    const v = lo + ((hi - lo) * i) / ticks;
    ctx.beginPath(); ctx.moveTo(pad.l, y(v)); ctx.lineTo(w - pad.r, y(v)); ctx.stroke();
    ctx.fillText(log ? `1e${Math.round(v)}` : v.toFixed(2), 4, y(v) + 4);
  }
  for (let t = 0; t <= 85; t += 15) {
    if (t < theta[0] || t > theta[theta.length - 1]) continue;
    ctx.fillText(`${t}°`, x(t) - 8, h - 8);
  }

  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.lineWidth = 1.8;
    ctx.beginPath();
    let pen = false;
    s.data.forEach((v, i) => {
      const tv = v === null ? null : tf(v);
      if (tv === null || !Number.isFinite(tv)) { pen = false; return; }
      pen ? ctx.lineTo(x(theta[i]), y(tv)) : ctx.moveTo(x(theta[i]), y(tv));
      pen = true;
    });
    ctx.stroke();
  }
  ctx.strokeStyle = "#999";
  ctx.setLineDash([4, 4]);
  ctx.beginPath(); ctx.moveTo(x(marker), pad.t); ctx.lineTo(x(marker), h - pad.b); ctx.stroke();
  ctx.setLineDash([]);
}

function renderPoint(report) {
  const b = report.budget.breakdown, t = report.budget.turbulence;
  const rows = [
    ["slant distance (m)", b.slant_distance_m], ["eta_geo", b.eta_geo], ["eta_scatt", b.eta_scatt],
    ["eta_turb", b.eta_turb], ["eta_bw", b.eta_bw], ["eta_total", b.eta_total],
    ["Fried r0 (m)", t.fried_m], ["scintillation index", t.scintillation_index], ["stray photons", report.stray.photons_per_window],
  ];
  const protocols = report.outcome.results.map((r) => `<tr><td>${r.protocol}</td><td>${fmt(r.qber)}</td><td>${fmt(r.keyrate)}</td></tr>`);
  $("point").innerHTML =
    rows.map(([k, v]) => `<tr><td>${k}</td><td colspan="2">${fmt(v)}</td></tr>`).join("") +
    `<tr><th>protocol</th><th>QBER</th><th>keyrate</th></tr>` + protocols.join("");
  $("point-title").textContent = `at ${report.zenith_deg}°`;
}

function update() {
  for (const id of ["mu", "dr", "v", "theta"]) $(`${id}-out`).textContent = $(id).value;
  $("d-out").textContent = (10 ** Number($("d").value)).toExponential(1);
  const scenario = $("scenario").value, ov = overrides(), theta = Number($("theta").value);
  try {
    const c = JSON.parse(sweep(scenario, ov, 0, 85, 1));
    const protos = Object.keys(c.qber);
    const series = (field) => protos.map((p) => ({ color: COLORS[p], data: c[field][p] }));
    plot($("eta"), c.theta_deg, [{ color: COLORS.eta, data: c.eta_total }], { log: true, marker: theta });
    plot($("qber"), c.theta_deg, series("qber"), { log: false, marker: theta });
    plot($("rate"), c.theta_deg, series("keyrate"), { log: true, marker: theta });
    renderPoint(JSON.parse(point(scenario, ov, theta)));
    const cross = ["bb84,b92", "bbm92,e91"].map((pair) => {
      const a = JSON.parse(crossover(scenario, ov, pair, "keyrate", 0.05)).crossover_deg;
      return `${pair.replace(",", " vs ")}: ${a === null ? "none" : a.toFixed(1) + "°"}`;
    });
    $("crossovers").textContent = `Keyrate crossovers: ${cross.join(", ")}`;
    $("error").textContent = "";
  } catch (e) {
    $("error").textContent = String(e);
  }
}

function syncDefaults() {
  const s = JSON.parse(default_scenario($("scenario").value));
  $("mu").value = s.protocol.mean_photon_number;
  $("dr").value = s.optics.receiver_diameter_m;
  $("v").value = s.atmosphere.ground_visibility_km;
  $("d").value = Math.log10(s.detector.dark_prob_per_window).toFixed(1);
}

await init();
$("legend").innerHTML = Object.entries(COLORS)
  .filter(([k]) => k !== "eta")
  .map(([k, c]) => `<span style="color:${c}">&#9632; ${k}</span>`)
  .join("");
$("scenario").addEventListener("change", () => { syncDefaults(); update(); });
for (const id of ["mu", "dr", "v", "d", "theta"]) $(id).addEventListener("input", update);
window.addEventListener("resize", update);
syncDefaults();
update();
