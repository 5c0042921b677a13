// Wire formats of the session service, mirrored verbatim.

export type WirePair = [number, number];

export interface CreateSessionRequest {
  kind: "cake" | "rent";
  players: string[];
  mode?: "envyfree" | "secretive" | "survivor";
  p?: number | null;
  q?: number | null;
  eps?: WirePair;
  resolution?: number;
  total_rent?: WirePair | number;
}

export interface CreateSessionResponse {
  id: string;
  resolution: number;
  state: string;
}

export interface Query {
  player: number;
  player_name: string;
  allowed: number[];
  query_index: number;
  division?: WirePair[];
  prices?: WirePair[];
}

export interface ScenarioDoc {
  removed: number[];
  matching: Record<string, number>;
}

export interface Outcome {
  kind: string;
  mode: string;
  division: WirePair[];
  cuts: WirePair[];
  scenarios: ScenarioDoc[];
  envy_gap: WirePair | null;
  certified: boolean;
  flag: string;
  resolution: number;
  prices?: WirePair[];
  [extra: string]: unknown;
}

export type SessionState =
  | { state: "awaiting_answer"; query: Query }
  | { state: "done"; outcome: Outcome };

export interface AnswerRequest {
  player: number;
  piece: number;
  query_index?: number;
}

export interface TranscriptEntry {
  player: number;
  values: WirePair[];
  allowed: number[];
  answer: number;
  ts?: number;
}
