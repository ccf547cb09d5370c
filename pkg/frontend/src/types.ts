/** Response shapes of the ontobench HTTP API (schemaVersion 1). */

export interface MetricsDisplay {
  precision: string;
  recall: string;
  f1: string;
}

export interface Metrics {
  tp: number;
  fp: number;
  fn: number;
  goldCount: number;
  precision: number;
  recall: number;
  f1: number;
  precisionPercent: number;
  recallPercent: number;
  f1Percent: number;
  display: MetricsDisplay;
  flags: string[];
}

export interface MatchPair {
  generated: string;
  gold: string;
  score: number;
  matchType: string;
}

export interface AlignmentReport {
  kind: string;
  pairs: MatchPair[];
  truePositives: string[];
  falsePositives: string[];
  falseNegatives: string[];
  metrics: Metrics;
}

export interface Suggestion {
  gold: string;
  score: number;
}

export interface AlignmentResponse {
  schemaVersion: number;
  sessionId: string;
  revision: number;
  report: AlignmentReport;
  entityLabels: Record<string, string>;
  suggestions: Record<string, Suggestion[]>;
}

export type Verdict = "ReclassifyToTP" | "KeepFP";

export interface Decision {
  generatedIri: string;
  verdict: Verdict;
  rationale: string;
  reviewer: string;
  timestamp: string;
}

export interface DecisionsResponse {
  schemaVersion: number;
  sessionId: string;
  revision: number;
  before: Metrics;
  after: Metrics;
  report: AlignmentReport;
}

export interface SessionSummary {
  id: string;
  methodology: string;
  provider: string;
  model: string;
  state: string;
  pendingHumanAction: string | null;
  involvementLevel: number;
  revision: number;
}

export interface SessionsResponse {
  schemaVersion: number;
  sessions: SessionSummary[];
}

export interface ArtifactSummary {
  step: string;
  classCount: number;
  classes: string[];
}

export interface TranscriptTurn {
  speaker: string;
  promptText: string;
  responseText: string;
  timestamp: string;
}

export interface SessionDoc {
  schemaVersion: number;
  id: string;
  methodology: string;
  provider: string;
  model: string;
  state: string;
  pendingHumanAction: string | null;
  involvementLevel: number;
  revision: number;
  flags: string[];
  roundsCompleted: number;
  turns: TranscriptTurn[];
  artifactSummaries: ArtifactSummary[];
}

export interface GoldEntity {
  iri: string;
  label: string;
  name: string;
}

export interface GoldEntitiesResponse {
  schemaVersion: number;
  classes: GoldEntity[];
  objectProperties: GoldEntity[];
}
