/**
 * Typed client for the scenq HTTP service.
 *
 * The UI performs no structural computation of its own: every number it
 * renders comes out of these response payloads.
 */

export interface ScenarioSummary {
  id: string;
  label: string;
  revision: number;
  digest: string;
}

export interface ScenarioDetail extends ScenarioSummary {
  scenario: {
    label: string;
    consequences: { id: string; label: string }[];
    alternatives: { id: string; label: string; consequences: string[] }[];
  };
}

export interface ComplexityValue {
  exact: string;
  decimal: string;
  one_to_one: boolean;
}

export interface ClassLevel {
  level: number;
  classes: string[][];
}

export interface LineGraphPayload {
  band: [number, number];
  nodes: string[];
  edges: [string, string][];
}

export interface AnalysisReport {
  revision: number;
  scenario: { id: string; label: string };
  digest: string;
  variant: string;
  alternatives: { id: string; label: string; dim: number }[];
  intersection: { ids: string[]; dims: number[][]; max_shared_face: number };
  one_to_one: boolean;
  condition: string | null;
  classes: Record<string, ClassLevel[]>;
  structure_vector: number[] | null;
  complexity: ComplexityValue | null;
  line_graphs: LineGraphPayload[];
  error?: string;
}

export interface LevelDelta {
  level: number;
  classes_a: number | null;
  classes_b: number | null;
}

export interface PairList {
  level: number;
  pairs: [string, string][];
}

export interface VariantDiff {
  revision_a: number;
  revision_b: number;
  a: { id: string; label: string; digest: string; complexity: ComplexityValue | null };
  b: { id: string; label: string; digest: string; complexity: ComplexityValue | null };
  complexity_delta: { exact: string; decimal: string } | null;
  direction: "decreased" | "increased" | "unchanged" | null;
  levels: LevelDelta[];
  merged: PairList[];
  split: PairList[];
  structural_change: boolean;
}

export type EditOp =
  | { op: "add-consequence"; id: string; label?: string }
  | { op: "remove-consequence"; id: string }
  | { op: "add-alternative"; id: string; label?: string; consequences: string[] }
  | { op: "remove-alternative"; id: string }
  | { op: "relink"; id: string; consequences: string[] };

export class ApiError extends Error {
  constructor(
    public status: number,
    public errorName: string,
    public detail: string,
  ) {
    super(`${errorName}: ${detail}`);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let name = `HTTP ${response.status}`;
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { error?: string; detail?: string };
    if (body.error) name = body.error;
    if (body.detail) detail = body.detail;
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(response.status, name, detail);
}

export class ScenqClient {
  constructor(private baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  async listScenarios(): Promise<ScenarioSummary[]> {
    const body = await this.getJson<{ scenarios: ScenarioSummary[] }>("/scenarios");
    return body.scenarios;
  }

  async getScenario(id: string): Promise<ScenarioDetail> {
    return this.getJson<ScenarioDetail>(`/scenarios/${id}`);
  }

  async createScenario(payload: string | object): Promise<ScenarioSummary> {
    const body = typeof payload === "string" ? payload : JSON.stringify(payload);
    const response = await fetch(`${this.baseUrl}/scenarios`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body,
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as ScenarioSummary;
  }

  async patchScenario(
    id: string,
    revision: number,
    edits: EditOp[],
  ): Promise<{ id: string; revision: number; digest: string }> {
    const response = await fetch(`${this.baseUrl}/scenarios/${id}`, {
      method: "PATCH",
      headers: { "Content-Type": "application/json", "If-Match": String(revision) },
      body: JSON.stringify({ edits }),
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as { id: string; revision: number; digest: string };
  }

  /**
   * Fetch the analysis report; minDim asks the service to include the line
   * graph at that threshold.  A NoSharedFaces condition arrives as a 422
   * whose body is still the (degraded) report, so surface it as a report.
   */
  async analysis(id: string, options: { minDim?: number } = {}): Promise<AnalysisReport> {
    const params = new URLSearchParams();
    if (options.minDim !== undefined) params.set("min-dim", String(options.minDim));
    const suffix = params.size ? `?${params}` : "";
    const response = await fetch(`${this.baseUrl}/scenarios/${id}/analysis${suffix}`);
    if (response.ok || response.status === 422) {
      const body = (await response.json()) as AnalysisReport;
      if (response.status === 422 && !body.condition) {
        throw new ApiError(422, body.error ?? "UnprocessableEntity", "analysis failed");
      }
      return body;
    }
    throw await parseError(response);
  }

  async compare(baselineId: string, currentId: string): Promise<VariantDiff> {
    return this.getJson<VariantDiff>(`/scenarios/${baselineId}/compare/${currentId}`);
  }
}
