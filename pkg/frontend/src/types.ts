// Wire schema of the annotation service. Field names and meanings are
// pinned by the server; offsets index into `normalized`, not the raw
// input, and `end` is exclusive.

export interface EntityView {
  surface: string;
  class: string;
  start: number;
  end: number;
  url: string;
  color: string;
}

export interface AnnotationResponse {
  normalized: string;
  entities: EntityView[];
  model: string;
  ms: number;
}
