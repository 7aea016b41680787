/** DOM rendering: a full re-render per state change, no framework. */

import type { GalleryStore, GalleryState, CandidateView } from "./state.js";
import type { TagToken } from "./types.js";

const ENTITY_COLORS: Record<string, string> = {
  M: "#b45309", // modifier: amber
  N: "#1d4ed8", // number: blue
  P: "#15803d", // part: green
  W: "#7e22ce", // whole: purple
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else if (key.startsWith("on")) continue;
    else node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

function entityLabel(tag: TagToken): string | null {
  if (tag.label === "O") return null;
  return tag.label.slice(2);
}

function renderTags(statement: string, tags: TagToken[]): HTMLElement {
  const bar = el("div", { class: "tagbar" });
  let cursor = 0;
  for (const tag of tags) {
    if (tag.start > cursor) bar.append(statement.slice(cursor, tag.start));
    const entity = entityLabel(tag);
    if (entity) {
      const span = el("span", {
        class: "entity",
        title: `${entity} entity`,
      }, tag.text);
      span.style.backgroundColor = `${ENTITY_COLORS[entity]}22`;
      span.style.borderBottom = `2px solid ${ENTITY_COLORS[entity]}`;
      bar.append(span);
    } else {
      bar.append(tag.text);
    }
    cursor = tag.end;
  }
  bar.append(statement.slice(cursor));
  return bar;
}

function scoreBadges(c: CandidateView): HTMLElement {
  const badges = el("div", { class: "scores" });
  const entries: [string, number][] = [
    ["total", c.scores.total],
    ["semantic", c.scores.semantic],
    ["visual", c.scores.visual],
    ["informative", c.scores.informative],
  ];
  for (const [name, value] of entries) {
    badges.append(el("span", { class: `badge badge-${name}`, title: name },
      `${name[0].toUpperCase()}${name === "total" ? "" : name.slice(1, 3)} ${value.toFixed(2)}`));
  }
  return badges;
}

function downloadSvg(name: string, markup: string): void {
  const blob = new Blob([markup], { type: "image/svg+xml" });
  const url = URL.createObjectURL(blob);
  const link = el("a", { href: url, download: name });
  document.body.append(link);
  link.click();
  link.remove();
  URL.revokeObjectURL(url);
}

function card(store: GalleryStore, c: CandidateView): HTMLElement {
  const node = el("article", {
    class: `card${store.state.selectedId === c.id ? " selected" : ""}`,
  });
  const preview = el("div", { class: "preview" });
  preview.innerHTML = c.svg;
  node.append(preview);

  const meta = el("div", { class: "meta" },
    el("span", { class: "bp" }, `${c.blueprint} · ${c.relation}`));
  if (c.refined) meta.append(el("span", { class: "badge refined" }, "refined"));
  node.append(meta, scoreBadges(c));

  const actions = el("div", { class: "actions" });
  const refineBtn = el("button", {}, "Refine");
  refineBtn.onclick = () => void store.openRefine(c.id);
  const exportBtn = el("button", {}, "Export");
  exportBtn.onclick = async () => {
    const markup = await store.exportCandidate(c.id);
    downloadSvg(`${c.id}.svg`, markup);
  };
  const saveBtn = el("button", {}, "Save");
  saveBtn.onclick = async () => {
    await store.saveTemplate(c.id, store.state.statement);
    saveBtn.textContent = "Saved ✓";
  };
  actions.append(refineBtn, exportBtn, saveBtn);
  node.append(actions);
  node.onclick = () => store.select(c.id);
  return node;
}

function refineDialog(store: GalleryStore, state: GalleryState): HTMLElement {
  const dialog = state.dialog!;
  const candidate = state.candidates.find((c) => c.id === dialog.candidateId)!;
  const panel = el("aside", { class: "dialog" });
  panel.append(el("h2", {}, `Refine ${candidate.blueprint}`));
  if (dialog.error) panel.append(el("p", { class: "error" }, dialog.error));

  const query = el("input", { value: dialog.query, class: "query" });
  query.onchange = () => void store.setAssetQuery(query.value);
  panel.append(el("label", {}, "Search assets: ", query));

  if (dialog.iconSlot) {
    const list = el("div", { class: "options icons" });
    for (const icon of dialog.icons) {
      const allowed = icon.allowed !== false;
      const button = el("button", { class: "option" },
        `${icon.id} (${icon.similarity.toFixed(2)})`);
      if (!allowed) {
        button.disabled = true;
        button.title = `not allowed here: ${icon.constraint}`;
        button.classList.add("blocked");
      } else {
        button.onclick = () =>
          void store.applyRefine(candidate.id, {
            icon: icon.id,
            icon_slot: dialog.iconSlot ?? undefined,
          });
      }
      list.append(button);
    }
    panel.append(el("h3", {}, `Icon (${dialog.iconSlot}, ${dialog.slotKind})`), list);
  }

  const paletteList = el("div", { class: "options palettes" });
  for (const palette of dialog.palettes) {
    const swatch = el("button", { class: "option swatch", title: palette.id });
    for (const role of ["background", "graphic_primary", "graphic_secondary", "text_emphasis"]) {
      const chip = el("span", { class: "chip" });
      chip.style.backgroundColor = palette.colors[role];
      swatch.append(chip);
    }
    swatch.append(` ${palette.id}`);
    if (palette.id === candidate.palette) swatch.classList.add("current");
    swatch.onclick = () => void store.applyRefine(candidate.id, { palette: palette.id });
    paletteList.append(swatch);
  }
  panel.append(el("h3", {}, "Palette"), paletteList);

  if (dialog.formSlots.length > 0) {
    const formList = el("div", { class: "options forms" });
    for (const form of dialog.forms) {
      const button = el("button", { class: "option" }, form.replace(/_/g, " "));
      button.onclick = () =>
        void store.applyRefine(candidate.id, {
          description_form: form,
          description_slot: dialog.formSlots[0],
        });
      formList.append(button);
    }
    panel.append(el("h3", {}, `Description (${dialog.formSlots[0]})`), formList);
  }

  const close = el("button", { class: "close" }, "Close");
  close.onclick = () => store.closeRefine();
  panel.append(close);
  return panel;
}

async function savedTab(store: GalleryStore, state: GalleryState): Promise<HTMLElement> {
  const wrap = el("section", { class: "saved" });
  if (state.templates.length === 0) {
    wrap.append(el("p", {}, "No saved templates yet."));
    return wrap;
  }
  for (const template of state.templates) {
    const item = el("article", { class: "card" });
    item.append(el("div", { class: "meta" }, el("span", {}, template.label),
      el("span", { class: "bp" }, template.id)));
    const preview = el("div", { class: "preview" });
    item.append(preview);
    store.api.templateSvg(template.id).then((markup) => {
      preview.innerHTML = markup;
    });
    wrap.append(item);
  }
  return wrap;
}

export function mount(store: GalleryStore, root: HTMLElement): void {
  const render = (state: GalleryState): void => {
    root.replaceChildren();

    const form = el("form", { class: "prompt" });
    const input = el("input", {
      class: "statement",
      placeholder: "e.g. More than 40% of students like football.",
      value: state.statement,
    });
    const go = el("button", { type: "submit" }, state.busy ? "Working…" : "Generate");
    go.disabled = state.busy;
    form.append(input, go);
    form.onsubmit = (event) => {
      event.preventDefault();
      void store.submitStatement(input.value);
    };
    root.append(form);

    if (state.error) root.append(el("p", { class: "error inline" }, state.error));
    if (state.tags.length > 0) root.append(renderTags(state.statement, state.tags));

    const tabs = el("nav", { class: "tabs" });
    for (const tab of ["gallery", "saved"] as const) {
      const button = el("button", { class: state.tab === tab ? "active" : "" },
        tab === "gallery" ? "Gallery" : "Saved");
      button.onclick = () => {
        store.setTab(tab);
        if (tab === "saved") void store.loadTemplates();
      };
      tabs.append(button);
    }
    root.append(tabs);

    if (state.tab === "gallery") {
      const grid = el("main", { class: "grid" });
      for (const candidate of state.candidates) grid.append(card(store, candidate));
      root.append(grid);
      if (state.dialog) root.append(refineDialog(store, state));
    } else {
      void savedTab(store, state).then((node) => root.append(node));
    }
  };

  store.subscribe(render);
  render(store.state);
}
