// Expects the wasm-bindgen output in ./pkg (see the README).
import init, { Session } from "./pkg/roc_web.js";

const $ = (id) => document.getElementById(id);

let session;

function status() {
  $("status").textContent = `${session.asserted()} asserted triples, ${session.total()} after materialization`;
}

function fail(el, e) {
  el.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = String(e);
  el.appendChild(p);
}

function table(el, header, rows) {
  const t = document.createElement("table");
  const head = t.insertRow();
  for (const h of header) {
    const th = document.createElement("th");
    th.textContent = h;
    head.appendChild(th);
  }
  for (const r of rows) {
    const tr = t.insertRow();
    for (const v of r) tr.insertCell().textContent = v ?? "";
  }
  el.innerHTML = "";
  el.appendChild(t);
}

$("run-query").onclick = () => {
  const fmt = document.querySelector("input[name=fmt]:checked").value;
  try {
    $("query-out").textContent = session.query($("sparql").value, fmt);
  } catch (e) {
    $("query-out").textContent = "error: " + e;
  }
};

$("run-episodes").onclick = () => {
  const out = $("episodes-out");
  try {
    const eps = JSON.parse(session.episodes($("ep-country").value, $("ep-indicator").value, Number($("ep-level").value)));
    if (eps.length === 0) out.textContent = "no episodes";
    else table(out, ["start", "end", "days"], eps.map((e) => [e.start, e.end, e.days]));
  } catch (e) {
    fail(out, e);
  }
};

$("run-corr").onclick = () => {
  const out = $("corr-out");
  try {
    const rep = JSON.parse(
      session.correlation($("lc-country").value, $("lc-indicator").value, $("lc-outcome").value,
        Number($("lc-lag").value), $("lc-mode").value));
    table(out, ["lag", "overlap", "r"],
      rep.lags.map((l) => [l.lag, l.overlap, l.r === null ? "" : l.r.toFixed(4)]));
    const p = document.createElement("p");
    p.textContent = rep.best_lag === null ? "no defined correlation" : `max |r| at lag ${rep.best_lag} (${rep.mode})`;
    out.appendChild(p);
  } catch (e) {
    fail(out, e);
  }
};

$("csv-file").onchange = async (ev) => {
  const file = ev.target.files[0];
  if (!file) return;
  try {
    const summary = session.addCsv($("source").value, await file.text());
    status();
    $("status").textContent += ` (${file.name}: ${summary})`;
  } catch (e) {
    $("status").textContent = "error: " + e;
  }
};

$("reset").onclick = () => {
  session = Session.sample();
  status();
};

await init();
session = Session.sample();
$("sparql").value = Session.exampleQuery();
status();
