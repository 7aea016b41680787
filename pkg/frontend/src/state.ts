/** Gallery state and actions.
 *
 * All numbers shown anywhere come from API payloads; this store never
 * computes scores or layout. Candidate order equals API order, with
 * refined candidates inserted directly after their parents. Refines on
 * one candidate are queued so parent/child lineage stays unambiguous.
 */

import { ApiClient, ApiRequestError } from "./api.js";
import type {
  Candidate,
  IconOption,
  PaletteOption,
  ReplaceSpec,
  SessionResponse,
  TagToken,
  TemplateEntry,
} from "./types.js";

export interface CandidateView extends Candidate {
  refined: boolean;
}

export interface RefineDialog {
  candidateId: string;
  iconSlot: string | null;
  slotKind: string | null;
  query: string;
  icons: IconOption[];
  palettes: PaletteOption[];
  forms: string[];
  formSlots: string[];
  error: string | null;
  busy: boolean;
}

export interface GalleryState {
  statement: string;
  sessionId: string | null;
  seed: number;
  relation: string | null;
  tags: TagToken[];
  candidates: CandidateView[];
  selectedId: string | null;
  dialog: RefineDialog | null;
  templates: TemplateEntry[];
  tab: "gallery" | "saved";
  error: string | null;
  busy: boolean;
}

type Listener = (state: GalleryState) => void;

export function insertAfterParent(
  candidates: CandidateView[],
  child: CandidateView,
): CandidateView[] {
  const out = [...candidates];
  const at = child.parent === null
    ? out.length
    : out.findIndex((c) => c.id === child.parent);
  if (at === -1 || child.parent === null) {
    out.push(child);
  } else {
    out.splice(at + 1, 0, child);
  }
  return out;
}

export class GalleryStore {
  readonly api: ApiClient;
  private listeners: Listener[] = [];
  private refineQueues = new Map<string, Promise<unknown>>();

  state: GalleryState = {
    statement: "",
    sessionId: null,
    seed: 0,
    relation: null,
    tags: [],
    candidates: [],
    selectedId: null,
    dialog: null,
    templates: [],
    tab: "gallery",
    error: null,
    busy: false,
  };

  constructor(api: ApiClient) {
    this.api = api;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(patch: Partial<GalleryState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  selected(): CandidateView | null {
    return this.state.candidates.find((c) => c.id === this.state.selectedId) ?? null;
  }

  // -- actions ---------------------------------------------------------------

  async submitStatement(statement: string, seed = 0, top = 8): Promise<void> {
    const text = statement.trim();
    if (!text) {
      this.emit({ error: "enter a statement first" });
      return;
    }
    this.emit({ busy: true, error: null });
    let session: SessionResponse;
    try {
      session = await this.api.createSession(text, seed, top);
    } catch (err) {
      const message =
        err instanceof ApiRequestError && err.status === 400
          ? "no proportion fact found"
          : String(err);
      this.emit({ busy: false, error: message, candidates: [], tags: [], sessionId: null });
      return;
    }
    this.emit({
      busy: false,
      statement: session.statement,
      sessionId: session.session_id,
      seed: session.seed,
      relation: session.relation,
      tags: session.tags,
      candidates: session.candidates.map((c) => ({ ...c, refined: false })),
      selectedId: session.candidates[0]?.id ?? null,
      dialog: null,
      tab: "gallery",
      error: null,
    });
  }

  select(candidateId: string): void {
    if (this.state.candidates.some((c) => c.id === candidateId)) {
      this.emit({ selectedId: candidateId });
    }
  }

  setTab(tab: "gallery" | "saved"): void {
    this.emit({ tab });
  }

  async openRefine(candidateId: string): Promise<void> {
    const candidate = this.state.candidates.find((c) => c.id === candidateId);
    if (!candidate) return;
    const iconSlots = Object.keys(candidate.icons).sort();
    const iconSlot = iconSlots[0] ?? null;
    const slotKind = iconSlot ? candidate.slots[iconSlot] ?? null : null;
    const dialog: RefineDialog = {
      candidateId,
      iconSlot,
      slotKind,
      query: this.state.statement,
      icons: [],
      palettes: [],
      forms: candidate.forms_available,
      formSlots: Object.keys(candidate.description_slots).sort(),
      error: null,
      busy: true,
    };
    this.emit({ dialog, selectedId: candidateId });
    await this.refreshAssetOptions();
  }

  closeRefine(): void {
    this.emit({ dialog: null });
  }

  async setAssetQuery(query: string): Promise<void> {
    if (!this.state.dialog) return;
    this.emit({ dialog: { ...this.state.dialog, query } });
    await this.refreshAssetOptions();
  }

  private async refreshAssetOptions(): Promise<void> {
    const dialog = this.state.dialog;
    if (!dialog) return;
    try {
      const [icons, palettes] = await Promise.all([
        this.api.icons(dialog.query, dialog.slotKind),
        this.api.palettes(dialog.query),
      ]);
      if (this.state.dialog?.candidateId !== dialog.candidateId) return;
      this.emit({ dialog: { ...this.state.dialog, icons, palettes, busy: false } });
    } catch (err) {
      this.emit({ dialog: { ...dialog, error: String(err), busy: false } });
    }
  }

  /** Queue a refine per candidate so lineage stays unambiguous. */
  applyRefine(candidateId: string, replace: ReplaceSpec): Promise<CandidateView | null> {
    const prior = this.refineQueues.get(candidateId) ?? Promise.resolve();
    const task = prior.then(() => this.runRefine(candidateId, replace));
    this.refineQueues.set(candidateId, task.catch(() => undefined));
    return task;
  }

  private async runRefine(
    candidateId: string,
    replace: ReplaceSpec,
  ): Promise<CandidateView | null> {
    const sessionId = this.state.sessionId;
    if (!sessionId) return null;
    try {
      const child = await this.api.refine(sessionId, candidateId, replace);
      const view: CandidateView = { ...child, refined: true };
      this.emit({
        candidates: insertAfterParent(this.state.candidates, view),
        selectedId: view.id,
        dialog: null,
      });
      return view;
    } catch (err) {
      if (err instanceof ApiRequestError && this.state.dialog) {
        this.emit({
          dialog: {
            ...this.state.dialog,
            error: err.body.constraint
              ? `blocked by constraint: ${err.body.constraint}`
              : err.body.error,
            busy: false,
          },
        });
        return null;
      }
      throw err;
    }
  }

  async exportCandidate(candidateId: string): Promise<string> {
    return this.api.exportSvg(candidateId);
  }

  async saveTemplate(candidateId: string, label: string): Promise<string> {
    const tid = await this.api.saveTemplate(candidateId, label);
    await this.loadTemplates();
    return tid;
  }

  async loadTemplates(): Promise<void> {
    const templates = await this.api.listTemplates();
    this.emit({ templates });
  }
}
