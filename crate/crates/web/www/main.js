import init, { solveProfile, scalingSweep, qLaplacianLimit } from './pkg/dphase_web.js';

const num = (id) => Number(document.getElementById(id).value);
const params = () => ({ p: num('p'), q: num('q'), beta: num('beta'), delta: num('delta'), n: num('n') });

function show(id, text, isError = false) {
  const el = document.getElementById(id);
  el.textContent = text;
  el.className = isError ? 'out err' : 'out';
}

// Line plot of several series sharing one x axis; `log` plots log10 of both axes.
function plot(id, series, { log = false, points = false } = {}) {
  const canvas = document.getElementById(id);
  const ctx = canvas.getContext('2d');
  const W = canvas.width, H = canvas.height, pad = 48;
  ctx.clearRect(0, 0, W, H);
  const tf = (v) => (log ? Math.log10(v) : v);
  const xs = series.flatMap((s) => Array.from(s.x, tf));
  const ys = series.flatMap((s) => Array.from(s.y, tf));
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (y1 === y0) y1 = y0 + 1;
  const sx = (v) => pad + ((tf(v) - x0) / (x1 - x0 || 1)) * (W - 2 * pad);
  const sy = (v) => H - pad + ((y0 - tf(v)) / (y1 - y0)) * (H - 2 * pad);

  ctx.strokeStyle = '#999';
  ctx.strokeRect(pad, pad, W - 2 * pad, H - 2 * pad);
  ctx.fillStyle = '#555';
  ctx.font = '12px sans-serif';
  const label = (v) => (log ? `1e${v.toFixed(1)}` : v.toPrecision(3));
  ctx.fillText(label(y1), 4, pad + 4);
  ctx.fillText(label(y0), 4, H - pad);
  ctx.fillText(label(x0), pad, H - pad + 16);
  ctx.fillText(label(x1), W - pad - 30, H - pad + 16);

  series.forEach((s, k) => {
    ctx.strokeStyle = ctx.fillStyle = s.color;
    ctx.beginPath();
    for (let i = 0; i < s.x.length; i++) {
      const [px, py] = [sx(s.x[i]), sy(s.y[i])];
      i ? ctx.lineTo(px, py) : ctx.moveTo(px, py);
      if (points) ctx.fillRect(px - 3, py - 3, 6, 6);
    }
    ctx.stroke();
    ctx.fillText(s.name, W - pad - 160, pad + 16 + 16 * k);
  });
}

function guarded(outId, f) {
  return () => {
    show(outId, 'running…');
    // Let the status text paint before the solver blocks the thread.
    setTimeout(() => {
      try {
        f();
      } catch (e) {
        show(outId, String(e.message ?? e), true);
      }
    }, 10);
  };
}

document.getElementById('solve').onclick = guarded('solve-out', () => {
  const { p, q, beta, delta, n } = params();
  const lambda = num('lambda');
  const t = performance.now();
  const r = solveProfile(p, q, beta, delta, lambda, n);
  show('solve-out', `‖u‖∞ = ${r.supNorm.toPrecision(8)}, ${r.iterations} Newton steps, ${(performance.now() - t).toFixed(0)} ms`);
  const x = r.x;
  plot('profile-plot', [
    { name: 'u', x, y: r.u, color: '#1f5fbf' },
  ]);
});

document.getElementById('sweep').onclick = guarded('sweep-out', () => {
  const { p, q, beta, delta, n } = params();
  const s = scalingSweep(p, q, beta, delta, num('lo'), num('hi'), n);
  show(
    'sweep-out',
    `fitted exponent ${s.slope.toFixed(5)} (R² ${s.rSquared.toFixed(6)}), 1/(q−1+β) = ${s.target.toFixed(5)}`,
  );
  const lambdas = s.lambdas;
  const probe = s.probe;
  const anchor = probe[probe.length - 1] / lambdas[lambdas.length - 1] ** s.target;
  plot(
    'sweep-plot',
    [
      { name: 'u(probe)', x: lambdas, y: probe, color: '#1f5fbf' },
      { name: 'C λ^(1/(q−1+β))', x: lambdas, y: lambdas.map((l) => anchor * l ** s.target), color: '#d0661e' },
    ],
    { log: true, points: true },
  );
});

document.getElementById('limit').onclick = guarded('limit-out', () => {
  const { p, q, delta, n } = params();
  const r = qLaplacianLimit(p, q, delta, num('limit-lambda'), n);
  show('limit-out', `sup distance ${r.distance.toExponential(4)}`);
  plot('limit-plot', [
    { name: 'λ^(−1/(q−1)) u_λ', x: r.x, y: r.rescaled, color: '#1f5fbf' },
    { name: 'q-Laplacian limit', x: r.x, y: r.limit, color: '#d0661e' },
  ]);
});

await init();
