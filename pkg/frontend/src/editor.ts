/**
 * Canvas scenario editor: one class owning the DOM, delegating every document
 * mutation to the pure helpers in document.ts so the UI layer stays thin and
 * the logic stays testable without a browser.
 */

import {
  clearDocument,
  deleteSelection,
  DocumentError,
  EditorDocument,
  fromConfig,
  markSaved,
  moveUnit,
  newDocument,
  PlaceResult,
  placeUnit,
  placeZone,
  rotateSelection,
  saveEnabled,
  select,
  Selection,
  setMaxSteps,
  setName,
  setSnap,
  setUnitAttribute,
  setUnitHeading,
  setUnitTeam,
  updateZone,
  validate,
  zoneFromDrag,
} from "./document.js";
import { wedgePolygon } from "./fov.js";
import { gridShape } from "./grid.js";
import {
  PRESET_NAMES,
  SPEC_FIELDS,
  UnitSpecData,
  ZONE_TYPES,
  ZoneType,
} from "./presets.js";
import {
  loadScenario,
  resolvedSpec,
  saveScenario,
  ScenarioFormatError,
} from "./scenario.js";
import {
  flashRejection,
  initialView,
  setHover,
  toggleSight,
  ViewState,
  visibleWedges,
} from "./viewstate.js";

const COLORS = {
  background: "#1b1e24",
  field: "#232730",
  margin: "#2c3140",
  gridLine: "#333a49",
  teams: ["#5b9bd5", "#e06666"],
  unitStroke: "#11131a",
  heading: "#f5f5f5",
  selection: "#ffd966",
  hover: "#aab6cc",
  wedge: "rgba(255, 217, 102, 0.18)",
  wedgeEdge: "rgba(255, 217, 102, 0.55)",
  reject: "rgba(224, 70, 70, 0.65)",
  zones: { lava: "#c4501e", bush: "#3f7a3f", swamp: "#4a6a8a" } as { [k: string]: string },
  text: "#d6dae3",
} as const;

const CANVAS_WIDTH_PX = 720;

type Tool =
  | { kind: "select" }
  | { kind: "unit"; preset: string }
  | { kind: "zone"; zoneType: ZoneType };

type Drag =
  | { kind: "zone"; zoneType: ZoneType; start: [number, number]; current: [number, number] }
  | { kind: "move"; index: number; current: [number, number] }
  | null;

function toolLabel(tool: Tool): string {
  if (tool.kind === "select") return "select";
  if (tool.kind === "unit") return tool.preset;
  return tool.zoneType;
}

export class ScenarioEditor {
  private doc: EditorDocument;
  private view: ViewState;
  private tool: Tool = { kind: "select" };
  private drag: Drag = null;
  private category = "";
  private status = "";
  private statusIsError = false;
  private scale = 1;
  private flashTimer: ReturnType<typeof setTimeout> | null = null;

  private readonly canvas: HTMLCanvasElement;
  private readonly ctx: CanvasRenderingContext2D;
  private readonly palette: HTMLElement;
  private readonly panel: HTMLElement;
  private readonly statusBar: HTMLElement;
  private readonly dialog: HTMLElement;

  constructor(private readonly container: HTMLElement) {
    this.doc = newDocument(40, 40, 2, 2);
    this.view = initialView();
    container.innerHTML = this.template();

    this.canvas = container.querySelector(".ed-canvas") as HTMLCanvasElement;
    this.ctx = this.canvas.getContext("2d") as CanvasRenderingContext2D;
    this.palette = container.querySelector(".ed-palette") as HTMLElement;
    this.panel = container.querySelector(".ed-panel") as HTMLElement;
    this.statusBar = container.querySelector(".ed-status") as HTMLElement;
    this.dialog = container.querySelector(".ed-dialog") as HTMLElement;

    this.buildPalette();
    this.bindToolbar();
    this.bindCanvas();
    this.bindKeys();
    this.resizeCanvas();
    this.refresh();
  }

  // ---------------------------------------------------------------- markup

  private template(): string {
    return `
      <div class="ed-toolbar">
        <button data-act="new">New</button>
        <button data-act="clear">Clear</button>
        <button data-act="load">Load</button>
        <input class="ed-file" type="file" accept=".json,application/json" hidden>
        <button data-act="save">Save</button>
        <button data-act="sight">Sight</button>
        <label><input class="ed-snap" type="checkbox" checked> snap</label>
        <span class="ed-team-pick">team
          <label><input type="radio" name="ed-team" value="0" checked> 0</label>
          <label><input type="radio" name="ed-team" value="1"> 1</label>
        </span>
        <label>name <input class="ed-name" type="text" size="18"></label>
        <label>steps <input class="ed-steps" type="number" min="1" step="1"></label>
        <label>category <input class="ed-category" type="text" size="10"
          placeholder="(none)"></label>
      </div>
      <div class="ed-body">
        <div class="ed-palette"></div>
        <canvas class="ed-canvas"></canvas>
        <div class="ed-panel"></div>
      </div>
      <div class="ed-status"></div>
      <div class="ed-dialog" hidden>
        <div class="ed-dialog-box">
          <h3>New scenario</h3>
          <label>width <input data-dim="width" type="number" value="40"></label>
          <label>height <input data-dim="height" type="number" value="40"></label>
          <label>margin <input data-dim="margin" type="number" value="2"></label>
          <label>spacing <input data-dim="spacing" type="number" value="2"></label>
          <div class="ed-dialog-error"></div>
          <div class="ed-dialog-row">
            <button data-act="create">Create</button>
            <button data-act="cancel">Cancel</button>
          </div>
        </div>
      </div>`;
  }

  private buildPalette(): void {
    const rows: string[] = ['<button class="ed-tool active" data-tool="select">select</button>'];
    rows.push('<div class="ed-palette-head">units</div>');
    for (const name of PRESET_NAMES) {
      rows.push(`<button class="ed-tool" data-tool="unit:${name}">${name}</button>`);
    }
    rows.push('<div class="ed-palette-head">zones</div>');
    for (const z of ZONE_TYPES) {
      rows.push(`<button class="ed-tool" data-tool="zone:${z}">${z}</button>`);
    }
    this.palette.innerHTML = rows.join("");
    this.palette.addEventListener("click", (ev) => {
      const btn = (ev.target as HTMLElement).closest("[data-tool]");
      if (!(btn instanceof HTMLElement)) return;
      const spec = btn.dataset.tool ?? "select";
      if (spec === "select") this.tool = { kind: "select" };
      else if (spec.startsWith("unit:")) this.tool = { kind: "unit", preset: spec.slice(5) };
      else this.tool = { kind: "zone", zoneType: spec.slice(5) as ZoneType };
      for (const b of this.palette.querySelectorAll(".ed-tool")) {
        b.classList.toggle("active", b === btn);
      }
      this.refresh();
    });
  }

  // --------------------------------------------------------------- toolbar

  private bindToolbar(): void {
    const q = <T extends Element>(sel: string) => this.container.querySelector(sel) as T;
    q<HTMLButtonElement>('[data-act="new"]').addEventListener("click", () => this.openDialog());
    q<HTMLButtonElement>('[data-act="clear"]').addEventListener("click", () => {
      this.doc = clearDocument(this.doc);
      this.note("cleared, layout kept");
      this.refresh();
    });

    const fileInput = q<HTMLInputElement>(".ed-file");
    q<HTMLButtonElement>('[data-act="load"]').addEventListener("click", () => fileInput.click());
    fileInput.addEventListener("change", () => {
      const file = fileInput.files?.[0];
      if (file) void this.loadFile(file);
      fileInput.value = "";
    });

    q<HTMLButtonElement>('[data-act="save"]').addEventListener("click", () => this.saveFile());
    q<HTMLButtonElement>('[data-act="sight"]').addEventListener("click", (ev) => {
      this.view = toggleSight(this.view);
      (ev.currentTarget as HTMLElement).classList.toggle("active", this.view.sightAll);
      this.render();
    });
    q<HTMLInputElement>(".ed-snap").addEventListener("change", (ev) => {
      this.doc = setSnap(this.doc, (ev.target as HTMLInputElement).checked);
    });
    q<HTMLInputElement>(".ed-name").addEventListener("change", (ev) => {
      this.doc = setName(this.doc, (ev.target as HTMLInputElement).value);
      this.refresh();
    });
    q<HTMLInputElement>(".ed-steps").addEventListener("change", (ev) => {
      const n = Number((ev.target as HTMLInputElement).value);
      if (Number.isFinite(n)) this.doc = setMaxSteps(this.doc, Math.trunc(n));
      this.refresh();
    });
    q<HTMLInputElement>(".ed-category").addEventListener("change", (ev) => {
      this.category = (ev.target as HTMLInputElement).value.trim();
    });

    this.dialog.querySelector('[data-act="cancel"]')?.addEventListener("click", () => {
      this.dialog.hidden = true;
    });
    this.dialog.querySelector('[data-act="create"]')?.addEventListener("click", () => {
      this.createFromDialog();
    });
  }

  private openDialog(): void {
    (this.dialog.querySelector(".ed-dialog-error") as HTMLElement).textContent = "";
    this.dialog.hidden = false;
  }

  private createFromDialog(): void {
    const read = (name: string) =>
      Number((this.dialog.querySelector(`[data-dim="${name}"]`) as HTMLInputElement).value);
    try {
      this.doc = newDocument(read("width"), read("height"), read("margin"), read("spacing"));
      this.dialog.hidden = true;
      this.view = initialView();
      this.resizeCanvas();
      this.note("new document");
      this.refresh();
    } catch (err) {
      if (!(err instanceof DocumentError)) throw err;
      (this.dialog.querySelector(".ed-dialog-error") as HTMLElement).textContent = err.message;
    }
  }

  private async loadFile(file: File): Promise<void> {
    const text = await file.text();
    try {
      const config = loadScenario(text);
      this.doc = fromConfig(config, this.doc.grid);
      this.view = initialView();
      this.resizeCanvas();
      const notes = config.loadNotes.length ? `; notes: ${config.loadNotes.join(" | ")}` : "";
      this.note(`loaded ${file.name}${notes}`);
    } catch (err) {
      if (!(err instanceof ScenarioFormatError)) throw err;
      this.note(`load failed: ${err.message}`, true);
    }
    this.refresh();
  }

  private saveFile(): void {
    if (!saveEnabled(this.doc)) {
      const lines = validate(this.doc).violations;
      this.note(`cannot save: ${lines.join(" | ")}`, true);
      this.refresh();
      return;
    }
    const name = this.doc.config.name.replace(/[^A-Za-z0-9._-]+/g, "_") || "untitled";
    // Category folders are a filename convention: "<category>__<name>.json".
    const filename = this.category ? `${this.category}__${name}.json` : `${name}.json`;
    const blob = new Blob([saveScenario(this.doc.config)], { type: "application/json" });
    const url = URL.createObjectURL(blob);
    const a = window.document.createElement("a");
    a.href = url;
    a.download = filename;
    a.click();
    URL.revokeObjectURL(url);
    this.doc = markSaved(this.doc);
    this.note(`saved ${filename}`);
    this.refresh();
  }

  // ---------------------------------------------------------------- canvas

  private bindCanvas(): void {
    this.canvas.addEventListener("mousedown", (ev) => this.onDown(this.world(ev)));
    this.canvas.addEventListener("mousemove", (ev) => this.onMove(this.world(ev)));
    window.addEventListener("mouseup", (ev) => this.onUp(this.world(ev)));
    this.canvas.addEventListener("dblclick", (ev) => this.onDouble(this.world(ev)));
    this.canvas.addEventListener("contextmenu", (ev) => ev.preventDefault());
  }

  private bindKeys(): void {
    window.addEventListener("keydown", (ev) => {
      const tag = (ev.target as HTMLElement).tagName;
      if (tag === "INPUT" || tag === "SELECT" || tag === "TEXTAREA") return;
      if (ev.key === "q" || ev.key === "Q") {
        this.doc = rotateSelection(this.doc, "ccw");
        this.refresh();
      } else if (ev.key === "e" || ev.key === "E") {
        this.doc = rotateSelection(this.doc, "cw");
        this.refresh();
      } else if (ev.key === "Delete" || ev.key === "Backspace") {
        this.doc = deleteSelection(this.doc);
        this.refresh();
      } else if (ev.key === "Escape") {
        this.drag = null;
        this.doc = select(this.doc, null);
        this.refresh();
      }
    });
  }

  private world(ev: MouseEvent): [number, number] {
    const r = this.canvas.getBoundingClientRect();
    const x = ((ev.clientX - r.left) / r.width) * this.doc.config.field.width;
    const y = (1 - (ev.clientY - r.top) / r.height) * this.doc.config.field.height;
    return [x, y];
  }

  private currentTeam(): number {
    const checked = this.container.querySelector('input[name="ed-team"]:checked');
    return checked instanceof HTMLInputElement ? Number(checked.value) : 0;
  }

  private onDown(p: [number, number]): void {
    if (this.tool.kind === "unit") {
      this.applyPlace(placeUnit(this.doc, { preset: this.tool.preset }, this.currentTeam(), p));
      return;
    }
    if (this.tool.kind === "zone") {
      this.drag = { kind: "zone", zoneType: this.tool.zoneType, start: p, current: p };
      return;
    }
    const hit = this.hitTest(p);
    this.doc = select(this.doc, hit);
    if (hit?.kind === "unit") this.drag = { kind: "move", index: hit.index, current: p };
    this.refresh();
  }

  private onMove(p: [number, number]): void {
    if (this.drag) {
      this.drag = { ...this.drag, current: p };
      this.render();
      return;
    }
    if (this.tool.kind === "select") {
      const hit = this.hitTest(p);
      const hover = hit?.kind === "unit" ? hit.index : null;
      if (hover !== this.view.hoverUnit) {
        this.view = setHover(this.view, hover);
        this.render();
      }
    }
  }

  private onUp(p: [number, number]): void {
    const drag = this.drag;
    this.drag = null;
    if (!drag) return;
    if (drag.kind === "zone") {
      this.applyPlace(placeZone(this.doc, drag.zoneType, drag.start, p));
    } else {
      this.applyPlace(moveUnit(this.doc, drag.index, p));
    }
  }

  private onDouble(p: [number, number]): void {
    const hit = this.hitTest(p);
    if (!hit) return;
    this.doc = select(this.doc, hit);
    this.refresh();
    const first = this.panel.querySelector("input, select");
    if (first instanceof HTMLElement) first.focus();
  }

  private applyPlace(result: PlaceResult): void {
    if (result.ok) {
      this.doc = result.doc;
      this.note("");
    } else {
      this.note(result.reason, true);
      if (result.slots.length) {
        this.view = flashRejection(this.view, result.slots, performance.now());
        if (this.flashTimer) clearTimeout(this.flashTimer);
        this.flashTimer = setTimeout(() => this.render(), 650);
      }
    }
    this.refresh();
  }

  private hitTest(p: [number, number]): Selection {
    const units = this.doc.config.units;
    for (let i = units.length - 1; i >= 0; i--) {
      const u = units[i];
      const r = Math.max(resolvedSpec(u).body_radius, 0.45);
      if (Math.hypot(p[0] - u.position[0], p[1] - u.position[1]) <= r) {
        return { kind: "unit", index: i };
      }
    }
    const zones = this.doc.config.zones;
    for (let i = zones.length - 1; i >= 0; i--) {
      const z = zones[i];
      const dx = (p[0] - z.center[0]) / z.semi_axes[0];
      const dy = (p[1] - z.center[1]) / z.semi_axes[1];
      if (dx * dx + dy * dy <= 1) return { kind: "zone", index: i };
    }
    return null;
  }

  // --------------------------------------------------------------- drawing

  private resizeCanvas(): void {
    const { width, height } = this.doc.config.field;
    this.scale = CANVAS_WIDTH_PX / width;
    this.canvas.width = CANVAS_WIDTH_PX;
    this.canvas.height = Math.round(height * this.scale);
  }

  private sx(x: number): number {
    return x * this.scale;
  }

  private sy(y: number): number {
    return this.canvas.height - y * this.scale;
  }

  private render(): void {
    const { ctx } = this;
    const cfg = this.doc.config;
    ctx.fillStyle = COLORS.background;
    ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);
    ctx.fillStyle = COLORS.field;
    ctx.fillRect(0, 0, this.sx(cfg.field.width), this.canvas.height);

    const m = cfg.field.margin;
    ctx.fillStyle = COLORS.margin;
    ctx.fillRect(this.sx(m), this.sy(cfg.field.height - m),
      this.sx(cfg.field.width - 2 * m), (cfg.field.height - 2 * m) * this.scale);

    this.drawGrid();
    for (let i = 0; i < cfg.zones.length; i++) this.drawZone(i);
    for (const i of visibleWedges(this.view, this.doc)) this.drawWedge(i);
    for (let i = 0; i < cfg.units.length; i++) this.drawUnit(i);
    this.drawFlash();
    this.drawDragPreview();
  }

  private drawGrid(): void {
    const { ctx } = this;
    const cfg = this.doc.config;
    const { margin } = cfg.field;
    const s = this.doc.grid.spacing;
    const shape = gridShape(cfg.field.width, cfg.field.height, margin, s);
    ctx.strokeStyle = COLORS.gridLine;
    ctx.lineWidth = 1;
    ctx.beginPath();
    for (let i = 0; i <= shape.cols; i++) {
      const x = this.sx(margin + i * s);
      ctx.moveTo(x, this.sy(margin));
      ctx.lineTo(x, this.sy(margin + shape.rows * s));
    }
    for (let j = 0; j <= shape.rows; j++) {
      const y = this.sy(margin + j * s);
      ctx.moveTo(this.sx(margin), y);
      ctx.lineTo(this.sx(margin + shape.cols * s), y);
    }
    ctx.stroke();
  }

  private drawZone(index: number): void {
    const { ctx } = this;
    const z = this.doc.config.zones[index];
    const selected =
      this.doc.selection?.kind === "zone" && this.doc.selection.index === index;
    ctx.save();
    ctx.translate(this.sx(z.center[0]), this.sy(z.center[1]));
    ctx.scale(z.semi_axes[0] * this.scale, z.semi_axes[1] * this.scale);
    ctx.beginPath();
    ctx.arc(0, 0, 1, 0, 2 * Math.PI);
    ctx.restore();
    ctx.fillStyle = (COLORS.zones[z.type] ?? "#777777") + "66";
    ctx.fill();
    ctx.strokeStyle = selected ? COLORS.selection : COLORS.zones[z.type] ?? "#777777";
    ctx.lineWidth = selected ? 2.5 : 1.5;
    ctx.stroke();
  }

  private drawWedge(index: number): void {
    const u = this.doc.config.units[index];
    if (u === undefined) return;
    const spec = resolvedSpec(u);
    const poly = wedgePolygon({
      position: u.position,
      heading: (u.heading_deg * Math.PI) / 180,
      sightAngle: spec.sight_angle,
      sightRange: spec.sight_range,
    }, 96);
    const { ctx } = this;
    ctx.beginPath();
    ctx.moveTo(this.sx(poly[0][0]), this.sy(poly[0][1]));
    for (const [x, y] of poly.slice(1)) ctx.lineTo(this.sx(x), this.sy(y));
    ctx.closePath();
    ctx.fillStyle = COLORS.wedge;
    ctx.fill();
    ctx.strokeStyle = COLORS.wedgeEdge;
    ctx.lineWidth = 1;
    ctx.stroke();
  }

  private drawUnit(index: number): void {
    const { ctx } = this;
    const u = this.doc.config.units[index];
    const spec = resolvedSpec(u);
    const x = this.sx(u.position[0]);
    const y = this.sy(u.position[1]);
    const r = Math.max(spec.body_radius * this.scale, 4);
    const selected =
      this.doc.selection?.kind === "unit" && this.doc.selection.index === index;

    ctx.beginPath();
    ctx.arc(x, y, r, 0, 2 * Math.PI);
    ctx.fillStyle = COLORS.teams[u.team] ?? "#999999";
    ctx.fill();
    ctx.strokeStyle = COLORS.unitStroke;
    ctx.lineWidth = 1.5;
    ctx.stroke();

    const h = (u.heading_deg * Math.PI) / 180;
    ctx.beginPath();
    ctx.moveTo(x, y);
    ctx.lineTo(x + Math.cos(h) * r * 1.6, y - Math.sin(h) * r * 1.6);
    ctx.strokeStyle = COLORS.heading;
    ctx.lineWidth = 2;
    ctx.stroke();

    if (selected || this.view.hoverUnit === index) {
      ctx.beginPath();
      ctx.arc(x, y, r + 3, 0, 2 * Math.PI);
      ctx.strokeStyle = selected ? COLORS.selection : COLORS.hover;
      ctx.lineWidth = selected ? 2.5 : 1.5;
      ctx.stroke();
    }

    ctx.fillStyle = COLORS.text;
    ctx.font = "10px system-ui, sans-serif";
    ctx.textAlign = "center";
    ctx.fillText(u.preset ?? "custom", x, y + r + 11);
  }

  private drawFlash(): void {
    if (performance.now() > this.view.rejectedUntil) return;
    const { ctx } = this;
    const { margin } = this.doc.config.field;
    const s = this.doc.grid.spacing;
    ctx.fillStyle = COLORS.reject;
    for (const [i, j] of this.view.rejectedSlots) {
      const cx = this.sx(margin + i * s);
      const cy = this.sy(margin + j * s);
      const half = 0.35 * s * this.scale;
      ctx.fillRect(cx - half, cy - half, 2 * half, 2 * half);
    }
  }

  private drawDragPreview(): void {
    if (this.drag?.kind !== "zone") return;
    const z = zoneFromDrag(this.drag.zoneType, this.drag.start, this.drag.current);
    if (z.semi_axes[0] <= 0 || z.semi_axes[1] <= 0) return;
    const { ctx } = this;
    ctx.save();
    ctx.translate(this.sx(z.center[0]), this.sy(z.center[1]));
    ctx.scale(z.semi_axes[0] * this.scale, z.semi_axes[1] * this.scale);
    ctx.beginPath();
    ctx.arc(0, 0, 1, 0, 2 * Math.PI);
    ctx.restore();
    ctx.setLineDash([6, 4]);
    ctx.strokeStyle = COLORS.zones[this.drag.zoneType] ?? "#777777";
    ctx.lineWidth = 1.5;
    ctx.stroke();
    ctx.setLineDash([]);
  }

  // ----------------------------------------------------------- side panels

  private refresh(): void {
    this.syncToolbar();
    this.buildPanel();
    this.renderStatus();
    this.render();
  }

  private syncToolbar(): void {
    const name = this.container.querySelector(".ed-name") as HTMLInputElement;
    if (window.document.activeElement !== name) name.value = this.doc.config.name;
    const steps = this.container.querySelector(".ed-steps") as HTMLInputElement;
    if (window.document.activeElement !== steps) steps.value = String(this.doc.config.max_steps);
  }

  private buildPanel(): void {
    const sel = this.doc.selection;
    if (sel === null) {
      this.panel.innerHTML =
        `<div class="ed-panel-hint">tool: <b>${toolLabel(this.tool)}</b><br>` +
        "click to place or select<br>drag to stretch a zone<br>" +
        "Q / E rotate, Delete removes</div>";
      return;
    }
    if (sel.kind === "unit") this.buildUnitPanel(sel.index);
    else this.buildZonePanel(sel.index);
  }

  private buildUnitPanel(index: number): void {
    const u = this.doc.config.units[index];
    if (u === undefined) return;
    const spec = resolvedSpec(u);
    const overridden = new Set(u.overrides.map(([k]) => k));
    const rows: string[] = [
      `<div class="ed-panel-head">${u.preset ?? "custom"} #${index}</div>`,
      `<label>team <select data-unit="team">
         <option value="0"${u.team === 0 ? " selected" : ""}>0</option>
         <option value="1"${u.team === 1 ? " selected" : ""}>1</option>
       </select></label>`,
      `<label>heading <input data-unit="heading" type="number" step="15"
         value="${u.heading_deg}"></label>`,
    ];
    for (const key of SPEC_FIELDS) {
      if (key === "kinematic") {
        rows.push(`<label>kinematic <input data-spec="kinematic" type="checkbox"
          ${spec.kinematic ? "checked" : ""}></label>`);
        continue;
      }
      const mark = u.preset !== null && overridden.has(key) ? " class=\"ed-overridden\"" : "";
      rows.push(`<label${mark}>${key} <input data-spec="${key}" type="number" step="any"
        value="${spec[key]}"></label>`);
    }
    if (u.preset !== null) {
      rows.push('<button class="ed-reset" type="button">reset overrides</button>');
    }
    this.panel.innerHTML = rows.join("");

    this.panel.querySelector('[data-unit="team"]')?.addEventListener("change", (ev) => {
      this.doc = setUnitTeam(this.doc, index, Number((ev.target as HTMLSelectElement).value));
      this.refresh();
    });
    this.panel.querySelector('[data-unit="heading"]')?.addEventListener("change", (ev) => {
      const v = Number((ev.target as HTMLInputElement).value);
      if (Number.isFinite(v)) this.doc = setUnitHeading(this.doc, index, v);
      this.refresh();
    });
    for (const input of this.panel.querySelectorAll("[data-spec]")) {
      input.addEventListener("change", (ev) => {
        const el = ev.target as HTMLInputElement;
        const key = el.dataset.spec as keyof UnitSpecData;
        const value = el.type === "checkbox" ? el.checked : el.value === "" ? null : Number(el.value);
        if (typeof value === "number" && !Number.isFinite(value)) return;
        this.doc = setUnitAttribute(this.doc, index, key, value);
        this.refresh();
      });
    }
    this.panel.querySelector(".ed-reset")?.addEventListener("click", () => {
      let doc = this.doc;
      for (const [key] of this.doc.config.units[index].overrides) {
        doc = setUnitAttribute(doc, index, key as keyof UnitSpecData, null);
      }
      this.doc = doc;
      this.refresh();
    });
  }

  private buildZonePanel(index: number): void {
    const z = this.doc.config.zones[index];
    if (z === undefined) return;
    this.panel.innerHTML = [
      `<div class="ed-panel-head">${z.type} zone #${index}</div>`,
      `<label>type <select data-zone="type">${ZONE_TYPES.map(
        (t) => `<option value="${t}"${t === z.type ? " selected" : ""}>${t}</option>`,
      ).join("")}</select></label>`,
      `<label>center x <input data-zone="cx" type="number" step="any" value="${z.center[0]}"></label>`,
      `<label>center y <input data-zone="cy" type="number" step="any" value="${z.center[1]}"></label>`,
      `<label>semi axis x <input data-zone="ax" type="number" step="any" value="${z.semi_axes[0]}"></label>`,
      `<label>semi axis y <input data-zone="ay" type="number" step="any" value="${z.semi_axes[1]}"></label>`,
      `<label>effect <input data-zone="effect" type="number" step="any" value="${z.effect}"></label>`,
    ].join("");
    for (const input of this.panel.querySelectorAll("[data-zone]")) {
      input.addEventListener("change", (ev) => {
        const el = ev.target as HTMLInputElement | HTMLSelectElement;
        const which = (el as HTMLElement).dataset.zone as string;
        const current = this.doc.config.zones[index];
        if (which === "type") {
          this.doc = updateZone(this.doc, index, { type: el.value });
        } else {
          const v = Number(el.value);
          if (!Number.isFinite(v)) return;
          const patch =
            which === "cx" ? { center: [v, current.center[1]] as [number, number] } :
            which === "cy" ? { center: [current.center[0], v] as [number, number] } :
            which === "ax" ? { semi_axes: [v, current.semi_axes[1]] as [number, number] } :
            which === "ay" ? { semi_axes: [current.semi_axes[0], v] as [number, number] } :
            { effect: v };
          this.doc = updateZone(this.doc, index, patch);
        }
        this.refresh();
      });
    }
  }

  private note(text: string, isError = false): void {
    this.status = text;
    this.statusIsError = isError;
  }

  private renderStatus(): void {
    const report = validate(this.doc);
    const parts: string[] = [];
    if (this.status) {
      parts.push(`<span class="${this.statusIsError ? "ed-err" : "ed-ok"}">${this.status}</span>`);
    }
    parts.push(
      `${this.doc.config.units.length} units, ${this.doc.config.zones.length} zones` +
        (this.doc.dirty ? ", unsaved" : ""),
    );
    if (report.violations.length) {
      parts.push(`<span class="ed-err">${report.violations.length} problem(s): ` +
        `${report.violations.join(" | ")}</span>`);
    } else {
      parts.push('<span class="ed-ok">valid</span>');
    }
    this.statusBar.innerHTML = parts.join(" &middot; ");
  }
}
