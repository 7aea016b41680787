/** Payload shapes of the statviz JSON API. */

export interface Scores {
  semantic: number;
  visual: number;
  informative: number;
  total: number;
}

export interface Candidate {
  id: string;
  local_id: string;
  blueprint: string;
  relation: string;
  palette: string;
  icons: Record<string, string>;
  slots: Record<string, string>;
  description_slots: Record<string, { forms: string[] }>;
  forms_available: string[];
  scores: Scores;
  parent: string | null;
  svg: string;
}

export interface TagToken {
  text: string;
  start: number;
  end: number;
  label: string;
}

export interface Fact {
  value: number;
  surface_number: string;
  numerator: number | null;
  denominator: number | null;
  modifier: string | null;
  modifier_polarity: string;
  part: string | null;
  whole: string | null;
}

export interface SessionResponse {
  session_id: string;
  statement: string;
  seed: number;
  relation: string;
  facts: Fact[];
  tags: TagToken[];
  candidates: Candidate[];
}

export interface IconOption {
  id: string;
  similarity: number;
  query_word: string;
  keyword: string;
  aspect: number;
  flags: {
    pictograph_ok: boolean;
    fillable: boolean;
    hollow: boolean;
    background_ok: boolean;
    represents: string;
  };
  allowed?: boolean;
  constraint?: string | null;
}

export interface PaletteOption {
  id: string;
  similarity: number;
  query_word: string;
  keyword: string;
  keywords: string[];
  colors: Record<string, string>;
}

export interface TemplateEntry {
  id: string;
  label: string;
  created: number;
  seed: number;
  candidate: unknown;
}

export interface ApiError {
  error: string;
  diagnostic?: string;
  constraint?: string;
  reasons?: string[];
}

export interface ReplaceSpec {
  icon?: string;
  icon_slot?: string;
  palette?: string;
  description_form?: string;
  description_slot?: string;
}
