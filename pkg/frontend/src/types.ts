/** Wire types mirroring the server's JSON bodies. */

export interface TtsbRequest {
  uv_index: number;
  skin_rank: number;
  spf_level: number | string;
  environment?: Record<string, boolean>;
  altitude_ft?: number;
}

export interface TtsbResponse {
  kind: "burn_in" | "no_burn_risk";
  minutes: number | null;
  denominator: number;
  now: string;
  alarm_at: string | null;
}

export interface AnalysisResponse {
  lesion_class: "normal" | "atypical" | "melanoma";
  stage_one_score: number;
  stage_two_score: number | null;
  area_px: number;
  bbox: number[];
  advisory: boolean;
  mole_id?: string;
}

export interface UvObservation {
  at: string;
  lat: number;
  lon: number;
  uv_index: number;
  condition: string | null;
}

export interface UvDayCurve {
  date: string;
  lat: number;
  lon: number;
  hours: number[];
  samples: number[];
}

export interface MoleRecord {
  id: string;
  body_side: "front" | "back";
  position: { x: number; y: number };
  image_ref: string | null;
  captured_at: string;
  latest_result: AnalysisResponse | null;
}

export interface Profile {
  id: string;
  name: string;
  created_at: string;
  mole_count: number;
  moles: MoleRecord[];
}

export interface SkinTypeInfo {
  rank: number;
  name: string;
  tsMinutes: number;
  description: string;
  swatch: string;
}

/** The six skin types with neutral swatches (no imagery). */
export const SKIN_TYPES: SkinTypeInfo[] = [
  { rank: 1, name: "Fair Light Skin", tsMinutes: 67, swatch: "#f5d6c0",
    description: "Very fair; highly UV sensitive, always burns, never tans." },
  { rank: 2, name: "Light Skin", tsMinutes: 100, swatch: "#eec3a5",
    description: "Fair; burns easily, tans minimally." },
  { rank: 3, name: "Medium Light Skin", tsMinutes: 200, swatch: "#dfa986",
    description: "Light olive; sometimes burns, tans gradually." },
  { rank: 4, name: "Medium Dark Skin", tsMinutes: 300, swatch: "#b97f5a",
    description: "Olive to light brown; burns rarely, tans well." },
  { rank: 5, name: "Dark Skin", tsMinutes: 400, swatch: "#8a5a3b",
    description: "Brown; very rarely burns, tans deeply." },
  { rank: 6, name: "Deep Dark Skin", tsMinutes: 500, swatch: "#5b3a26",
    description: "Deeply pigmented; lowest burn tendency." },
];

/** Environment gallery, single-choice. */
export const ENVIRONMENTS = [
  "building", "shade", "cloud", "sand", "wet_sand",
  "grass", "wet_grass", "water", "snow",
] as const;

export type Environment = (typeof ENVIRONMENTS)[number];

/** SPF slider stops; values above 50 collapse onto the 50+ row. */
export const SPF_STOPS = [0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55] as const;

export function spfLabel(stop: number): string {
  return stop > 50 ? "55+" : String(stop);
}

/** The level actually sent to the API for a slider stop. */
export function spfApiLevel(stop: number): number | string {
  return stop > 50 ? "50+" : stop;
}
