/**
 * DOM view for the what-if explorer.  One Session drives every panel:
 * complexity readout, structure-vector strip, q-level slider with the class
 * view, the line-graph canvas, the edit panel, and the pinned-baseline
 * comparison.  render() is a full idempotent redraw from session state.
 */

import { AnalysisReport, EditOp, ScenqClient } from "./api.js";
import { ColorAssigner } from "./colors.js";
import { circularLayout } from "./layout.js";
import { Session } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const GRAPH_W = 380;
const GRAPH_H = 280;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

function arrowFor(direction: string | null): string {
  if (direction === "decreased") return "↓";
  if (direction === "increased") return "↑";
  return "=";
}

export class App {
  readonly session: Session;
  private readonly colors = new ColorAssigner();

  constructor(
    private root: HTMLElement,
    client: ScenqClient,
  ) {
    this.session = new Session(client);
    this.session.subscribe(() => this.render());
    this.buildSkeleton();
  }

  async init(): Promise<void> {
    await this.refreshScenarioList();
  }

  // ---- static skeleton -------------------------------------------------

  private buildSkeleton(): void {
    this.root.innerHTML = `
      <header class="topbar">
        <h1>scenario structure explorer</h1>
        <select id="scenario-select"></select>
        <button id="load-scenario">Load</button>
        <button id="reload-list" title="refresh scenario list">↻</button>
        <span id="session-info"></span>
      </header>
      <div id="error-banner" class="banner error" hidden></div>
      <div id="baseline-banner" class="banner warning" hidden>
        pinned baseline is no longer available on the server
      </div>
      <main class="panels">
        <section class="panel metrics">
          <div class="readout-block">
            <span class="caption">complexity C</span>
            <span id="complexity-readout">&mdash;</span>
            <span id="complexity-note" class="caption"></span>
          </div>
          <div id="vector-strip" class="strip"></div>
        </section>
        <section class="panel classes">
          <label class="slider-row">
            <span>connectivity level q</span>
            <input type="range" id="level-slider" min="0" max="0" step="1" value="0" />
            <span id="level-value">0</span>
          </label>
          <ul id="class-view"></ul>
        </section>
        <section class="panel graph">
          <span class="caption" id="graph-caption"></span>
          <svg id="line-graph" width="${GRAPH_W}" height="${GRAPH_H}"
               viewBox="0 0 ${GRAPH_W} ${GRAPH_H}"></svg>
        </section>
        <section class="panel editor">
          <span class="caption">edit batch (JSON list of ops)</span>
          <textarea id="edit-batch" rows="6" spellcheck="false"></textarea>
          <div class="row">
            <button id="apply-batch">Apply batch</button>
            <button id="commit-drafts">Commit staged</button>
            <button id="discard-drafts">Discard</button>
          </div>
          <div class="row quick-edit">
            <select id="quick-op">
              <option value="add-consequence">add consequence</option>
              <option value="remove-consequence">remove consequence</option>
              <option value="add-alternative">add alternative</option>
              <option value="remove-alternative">remove alternative</option>
              <option value="relink">relink</option>
            </select>
            <input id="quick-id" placeholder="id" />
            <input id="quick-label" placeholder="label" />
            <input id="quick-consequences" placeholder="consequence ids, comma-separated" />
            <button id="stage-quick">Stage</button>
          </div>
          <ul id="draft-list"></ul>
        </section>
        <section class="panel baseline">
          <div class="row">
            <button id="pin-baseline">Pin baseline</button>
            <span id="baseline-info" class="caption"></span>
          </div>
          <div id="compare-panel"></div>
        </section>
      </main>
    `;
    this.byId<HTMLButtonElement>("load-scenario").addEventListener("click", () => {
      const select = this.byId<HTMLSelectElement>("scenario-select");
      if (select.value) void this.session.loadScenario(select.value);
    });
    this.byId<HTMLButtonElement>("reload-list").addEventListener("click", () => {
      void this.refreshScenarioList();
    });
    this.byId<HTMLInputElement>("level-slider").addEventListener("input", (event) => {
      const value = Number((event.target as HTMLInputElement).value);
      void this.session.setLevel(value);
    });
    this.byId<HTMLButtonElement>("apply-batch").addEventListener("click", () => {
      void this.applyBatch();
    });
    this.byId<HTMLButtonElement>("commit-drafts").addEventListener("click", () => {
      void this.session.commitDrafts();
    });
    this.byId<HTMLButtonElement>("discard-drafts").addEventListener("click", () => {
      this.session.discardDrafts();
    });
    this.byId<HTMLButtonElement>("stage-quick").addEventListener("click", () => {
      this.stageQuickEdit();
    });
    this.byId<HTMLButtonElement>("pin-baseline").addEventListener("click", () => {
      void this.session.pinBaseline();
    });
  }

  private byId<T extends HTMLElement>(id: string): T {
    const node = this.root.querySelector(`#${id}`);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
  }

  // ---- actions ----------------------------------------------------------

  private async refreshScenarioList(): Promise<void> {
    const select = this.byId<HTMLSelectElement>("scenario-select");
    const current = select.value;
    const scenarios = await this.session.listScenarios();
    select.innerHTML = "";
    for (const s of scenarios) {
      const option = el("option", { value: s.id });
      option.textContent = `${s.id} — ${s.label || "(unlabeled)"}`;
      select.append(option);
    }
    if (current && scenarios.some((s) => s.id === current)) select.value = current;
  }

  private async applyBatch(): Promise<void> {
    const textarea = this.byId<HTMLTextAreaElement>("edit-batch");
    let edits: EditOp[];
    try {
      const parsed = JSON.parse(textarea.value) as unknown;
      edits = Array.isArray(parsed) ? (parsed as EditOp[])
        : ((parsed as { edits?: EditOp[] }).edits ?? []);
      if (!Array.isArray(edits) || edits.length === 0) {
        throw new Error("expected a non-empty list of edit ops");
      }
    } catch (error) {
      this.session.lastError = {
        source: "commit",
        name: "BadEditBatch",
        detail: String(error instanceof Error ? error.message : error),
      };
      this.render();
      return;
    }
    this.session.stageEdits(edits);
    const ok = await this.session.commitDrafts();
    if (ok) textarea.value = "";
  }

  private stageQuickEdit(): void {
    const op = this.byId<HTMLSelectElement>("quick-op").value as EditOp["op"];
    const id = this.byId<HTMLInputElement>("quick-id").value.trim();
    const label = this.byId<HTMLInputElement>("quick-label").value.trim();
    const consequences = this.byId<HTMLInputElement>("quick-consequences")
      .value.split(",").map((s) => s.trim()).filter(Boolean);
    if (!id) return;
    const edit = { op, id } as Record<string, unknown>;
    if (label) edit.label = label;
    if (op === "add-alternative" || op === "relink") edit.consequences = consequences;
    this.session.stageEdits([edit as unknown as EditOp]);
  }

  // ---- rendering ----------------------------------------------------------

  render(): void {
    const s = this.session;
    const report = s.report;
    this.byId<HTMLSpanElement>("session-info").textContent = s.scenarioId
      ? `${s.scenarioId} @ rev ${s.revision}${s.busy ? " …" : ""}`
      : s.busy ? "…" : "";

    const banner = this.byId<HTMLDivElement>("error-banner");
    if (s.lastError) {
      banner.hidden = false;
      banner.textContent = `${s.lastError.name}: ${s.lastError.detail}`;
    } else {
      banner.hidden = true;
      banner.textContent = "";
    }
    this.byId<HTMLDivElement>("baseline-banner").hidden = !s.baselineStale;

    this.renderMetrics(report);
    this.renderClasses(report);
    this.renderGraph(report);
    this.renderDrafts();
    this.renderComparison();
  }

  private renderMetrics(report: AnalysisReport | null): void {
    const readout = this.byId<HTMLSpanElement>("complexity-readout");
    const note = this.byId<HTMLSpanElement>("complexity-note");
    const strip = this.byId<HTMLDivElement>("vector-strip");
    strip.innerHTML = "";
    if (!report) {
      readout.textContent = "—";
      note.textContent = "";
      return;
    }
    if (report.condition) {
      readout.textContent = "—";
      note.textContent = report.condition;
    } else if (report.complexity) {
      readout.textContent = report.complexity.decimal;
      note.textContent = report.one_to_one
        ? "one-to-one"
        : `exact ${report.complexity.exact}`;
    }
    const vector = report.structure_vector;
    if (!vector) return;
    const peak = Math.max(...vector);
    vector.forEach((count, q) => {
      const chip = el("div", { class: "vector-chip", "data-level": String(q) });
      const bar = el("div", { class: "vector-bar" });
      bar.style.height = `${(count / peak) * 34 + 4}px`;
      chip.append(
        bar,
        el("span", { class: "vector-count" }, String(count)),
        el("span", { class: "vector-level" }, `q${q}`),
      );
      strip.append(chip);
    });
  }

  private renderClasses(report: AnalysisReport | null): void {
    const slider = this.byId<HTMLInputElement>("level-slider");
    const value = this.byId<HTMLSpanElement>("level-value");
    const view = this.byId<HTMLUListElement>("class-view");
    view.innerHTML = "";
    slider.max = String(this.session.maxLevel());
    slider.value = String(this.session.selectedLevel);
    value.textContent = String(this.session.selectedLevel);
    if (!report) return;
    for (const group of this.session.classesAtLevel()) {
      const item = el("li", { class: "class-chip" });
      for (const id of group) {
        const dot = el("span", { class: "dot" });
        dot.style.background = this.colors.colorOf(id);
        item.append(dot, el("span", {}, id), document.createTextNode(" "));
      }
      item.setAttribute("data-members", group.join(","));
      view.append(item);
    }
  }

  private renderGraph(report: AnalysisReport | null): void {
    const svg = this.byId<HTMLElement>("line-graph");
    const caption = this.byId<HTMLSpanElement>("graph-caption");
    while (svg.firstChild) svg.removeChild(svg.firstChild);
    const graph = report?.line_graphs[0];
    if (!report || !graph) {
      caption.textContent = "";
      return;
    }
    caption.textContent =
      `line graph, shared-face dimension ≥ ${graph.band[0]}`;
    this.colors.seed(report.alternatives.map((a) => a.id));
    const positions = circularLayout(graph.nodes, GRAPH_W, GRAPH_H);
    for (const [h, k] of graph.edges) {
      const a = positions.get(h);
      const b = positions.get(k);
      if (!a || !b) continue;
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", a.x.toFixed(1));
      line.setAttribute("y1", a.y.toFixed(1));
      line.setAttribute("x2", b.x.toFixed(1));
      line.setAttribute("y2", b.y.toFixed(1));
      line.setAttribute("class", "edge");
      svg.append(line);
    }
    for (const id of graph.nodes) {
      const p = positions.get(id);
      if (!p) continue;
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", p.x.toFixed(1));
      circle.setAttribute("cy", p.y.toFixed(1));
      circle.setAttribute("r", "9");
      circle.setAttribute("fill", this.colors.colorOf(id));
      circle.setAttribute("data-node", id);
      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("x", p.x.toFixed(1));
      text.setAttribute("y", (p.y - 13).toFixed(1));
      text.setAttribute("text-anchor", "middle");
      text.setAttribute("class", "node-label");
      text.textContent = id;
      svg.append(circle, text);
    }
  }

  private renderDrafts(): void {
    const list = this.byId<HTMLUListElement>("draft-list");
    list.innerHTML = "";
    const offending = this.session.lastError?.editIndex;
    this.session.drafts.forEach((edit, index) => {
      const item = el("li", {
        class: index === offending ? "draft offending" : "draft",
      });
      item.textContent = `${edit.op} ${edit.id}`;
      list.append(item);
    });
  }

  private renderComparison(): void {
    const panel = this.byId<HTMLDivElement>("compare-panel");
    const info = this.byId<HTMLSpanElement>("baseline-info");
    panel.innerHTML = "";
    const s = this.session;
    info.textContent = s.baselineId ? `baseline: ${s.baselineId}` : "no baseline pinned";
    const diff = s.diff;
    if (!diff) return;
    if (!diff.structural_change) {
      panel.append(el("div", { class: "neutral", id: "compare-complexity" },
                      "no structural change"));
      return;
    }
    const a = diff.a.complexity?.decimal ?? "—";
    const b = diff.b.complexity?.decimal ?? "—";
    panel.append(
      el(
        "div",
        { id: "compare-complexity", class: `direction-${diff.direction ?? "none"}` },
        `C: ${a} → ${b} ${arrowFor(diff.direction)}`,
      ),
    );
    const bars = el("div", { class: "level-bars" });
    for (const level of diff.levels) {
      const row = el("div", { class: "level-row" });
      row.append(
        el("span", { class: "level-tag" }, `q${level.level}`),
        this.countBar(level.classes_a, "a"),
        this.countBar(level.classes_b, "b"),
      );
      bars.append(row);
    }
    panel.append(bars);
    for (const [kind, rows] of [["merged", diff.merged], ["split", diff.split]] as const) {
      if (rows.length === 0) continue;
      const list = el("ul", { class: `pairs ${kind}` });
      for (const row of rows) {
        for (const [h, k] of row.pairs) {
          list.append(el("li", {}, `${kind} at q${row.level}: ${h} – ${k}`));
        }
      }
      panel.append(el("span", { class: "caption" }, `${kind} pairs`), list);
    }
  }

  private countBar(count: number | null, tag: string): HTMLElement {
    const wrap = el("span", { class: `count-bar ${tag}` });
    if (count === null) {
      wrap.classList.add("absent");
      wrap.textContent = "·";
      return wrap;
    }
    const bar = el("span", { class: "bar" });
    bar.style.width = `${count * 10}px`;
    wrap.append(bar, el("span", { class: "count" }, String(count)));
    return wrap;
  }
}
