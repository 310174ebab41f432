// Single-screen app for the disambiguation loop: create a session, review
// witness cards, choose expected outcomes, edit the purpose, repeat. Every
// render comes straight from the server's latest session view; the client
// never invents an expected value or derives partitions itself.

import { ApiError, Client, SessionView, WitnessJson } from "./api.js";
import { ValueJson, formatValue, outcomeSummary, parseLiteral, LiteralError } from "./values.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  props: Partial<HTMLElementTagNameMap[K]> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  Object.assign(node, props);
  node.append(...children);
  return node;
}

export class App {
  view: SessionView | null = null;

  constructor(public root: HTMLElement, public client: Client) {}

  install(): void {
    this.renderCreateForm();
  }

  banner(text: string, kind: "error" | "notice" = "notice"): void {
    const old = this.root.querySelector("#banner");
    if (old) old.remove();
    this.root.prepend(
      el("div", { id: "banner", className: `banner ${kind}`, textContent: text }),
    );
  }

  renderCreateForm(): void {
    this.root.replaceChildren();
    const fnspec = el("textarea", { id: "fnspec", rows: 8 });
    fnspec.placeholder = 'fn first_nonzero(nums: List(Float)) -> Float\n"""\n...\n"""';
    const corpus = el("input", { id: "corpus" });
    corpus.placeholder = "path to a candidate corpus directory on the server";
    const start = el("button", { id: "create", textContent: "Start session" });
    start.onclick = async () => {
      try {
        this.view = await this.client.createSession(fnspec.value, corpus.value);
        this.render();
      } catch (err) {
        this.banner(this.describe(err), "error");
      }
    };
    this.root.append(
      el("h1", { textContent: "specprobe" }),
      el("label", { textContent: "Function spec" }),
      fnspec,
      el("label", { textContent: "Candidate corpus" }),
      corpus,
      start,
    );
  }

  describe(err: unknown): string {
    if (err instanceof ApiError) {
      if (err.status === 404) return "session no longer exists on the server";
      return err.message;
    }
    return String(err);
  }

  async refresh(): Promise<void> {
    if (!this.view) return;
    try {
      this.view = await this.client.getSession(this.view.session_id);
      this.render();
    } catch (err) {
      this.banner(this.describe(err), "error");
    }
  }

  async resolve(args: ValueJson[], expected: ValueJson | "!error"): Promise<void> {
    if (!this.view) return;
    const before = this.view.survivors;
    try {
      this.view = await this.client.resolveExample(this.view.session_id, args, expected);
      this.render();
      const removed = this.view.removed ?? before - this.view.survivors;
      this.banner(`example accepted; removed ${removed} candidate(s)`);
    } catch (err) {
      // a 409 means this choice would empty the space: block, change nothing
      this.banner(this.describe(err), "error");
    }
  }

  async savePurpose(text: string, reacquire: boolean): Promise<void> {
    if (!this.view) return;
    const before = this.view.survivors;
    try {
      this.view = await this.client.editPurpose(this.view.session_id, text, reacquire);
      this.render();
      this.banner(`purpose saved; survivors ${before} -> ${this.view.survivors}`);
    } catch (err) {
      this.banner(this.describe(err), "error");
    }
  }

  render(): void {
    const view = this.view;
    if (!view) return;
    this.root.replaceChildren();
    const spec = view.report.spec;
    const params = spec.params.map((p) => `${p.name}: ${typeText(p.type)}`).join(", ");
    this.root.append(
      el("h1", { textContent: "specprobe" }),
      el(
        "div",
        { id: "spec" },
        el("code", { textContent: `fn ${spec.name}(${params}) -> ${typeText(spec.return_type)}` }),
        el("p", { id: "purpose-text", textContent: spec.purpose ?? "(no purpose statement)" }),
      ),
      el("div", { id: "survivors", textContent: `${view.survivors} surviving candidate(s)` }),
    );

    const cards = el("div", { id: "witnesses" });
    if (view.report.witnesses.length === 0) {
      cards.append(el("p", { className: "empty", textContent: "No ambiguity witnesses remain." }));
    }
    for (const w of view.report.witnesses) {
      cards.append(this.renderWitness(w, spec.name));
    }
    this.root.append(cards, this.renderPurposeEditor(spec.purpose ?? ""), this.renderHistory());
  }

  renderWitness(w: WitnessJson, fnName: string): HTMLElement {
    const card = el("div", { className: "witness" });
    card.append(
      el("code", { className: "call", textContent: `>>> ${fnName}(${w.args_text})` }),
      el("div", { className: "placeholder", textContent: "???" }),
    );
    const classes = el("ul", { className: "classes" });
    let hasError = false;
    for (const key of Object.keys(w.classes).sort()) {
      const ids = w.classes[key];
      const outcome = w.partition[ids[0]];
      const item = el(
        "li",
        {},
        el("span", { textContent: `${outcomeSummary(outcome)} (${ids.length} candidate(s))` }),
      );
      if (outcome.kind === "value") {
        const pick = el("button", { className: "choose", textContent: "this is correct" });
        pick.onclick = () => this.resolve(w.args, outcome.value);
        item.append(" ", pick);
      } else {
        hasError = true;
      }
      classes.append(item);
    }
    card.append(classes);

    const actions = el("div", { className: "actions" });
    const errBtn = el("button", {
      className: "choose-error",
      textContent: hasError ? "should error (as observed)" : "should error",
    });
    errBtn.onclick = () => this.resolve(w.args, "!error");
    const custom = el("input", { className: "custom" });
    custom.placeholder = "or type the expected value, e.g. 0.0";
    const apply = el("button", { className: "choose-custom", textContent: "use this value" });
    apply.onclick = () => {
      const spec = this.view!.report.spec;
      try {
        this.resolve(w.args, parseLiteral(custom.value, spec.return_type));
      } catch (err) {
        if (err instanceof LiteralError) {
          this.banner(`not a value literal: ${err.message}`, "error");
        } else {
          throw err;
        }
      }
    };
    actions.append(errBtn, custom, apply);
    card.append(actions);
    return card;
  }

  renderPurposeEditor(current: string): HTMLElement {
    const box = el("div", { id: "purpose-editor" });
    const text = el("textarea", { id: "purpose-input", rows: 3, value: current });
    const reacquire = el("input", { id: "reacquire" });
    reacquire.type = "checkbox";
    const save = el("button", { id: "save-purpose", textContent: "Save purpose" });
    save.onclick = () => this.savePurpose(text.value, reacquire.checked);
    box.append(
      el("h2", { textContent: "Purpose statement" }),
      text,
      el("label", {}, reacquire, " re-acquire candidates"),
      save,
    );
    return box;
  }

  renderHistory(): HTMLElement {
    const list = el("ol", { id: "history" });
    for (const event of this.view?.history ?? []) {
      const parts = Object.entries(event)
        .filter(([k]) => k !== "at")
        .map(([k, v]) => `${k}=${String(v)}`);
      list.append(el("li", { textContent: parts.join(" ") }));
    }
    const box = el("div", { id: "timeline" }, el("h2", { textContent: "History" }), list);
    return box;
  }
}

export function formatArgs(args: ValueJson[]): string {
  return args.map(formatValue).join(", ");
}

function typeText(t: unknown): string {
  if (typeof t === "string") return t[0].toUpperCase() + t.slice(1);
  if (t && typeof t === "object" && "list" in t) {
    const inner = (t as { list: unknown }).list;
    return `List(${inner === null ? "?" : typeText(inner)})`;
  }
  return String(t);
}
