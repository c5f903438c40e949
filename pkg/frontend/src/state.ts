/**
 * Session state for one what-if exploration: the scenario being edited, its
 * latest report, staged draft edits, the q-level selection, and the pinned
 * baseline used for comparison.
 *
 * Draft edits survive conflicts: a 409 triggers one automatic rebase onto
 * the fresh server revision, and if that fails too the drafts stay staged
 * and the conflict is surfaced to the view layer.
 */

import {
  AnalysisReport,
  ApiError,
  EditOp,
  ScenarioSummary,
  ScenqClient,
  VariantDiff,
} from "./api.js";

export interface SessionError {
  source: "load" | "commit" | "baseline";
  name: string;
  detail: string;
  /** index of the offending edit within the staged batch, when known */
  editIndex?: number;
}

export type Listener = () => void;

export class Session {
  scenarioId: string | null = null;
  revision = 0;
  label = "";
  report: AnalysisReport | null = null;
  selectedLevel = 0;
  drafts: EditOp[] = [];
  baselineId: string | null = null;
  baselineStale = false;
  diff: VariantDiff | null = null;
  lastError: SessionError | null = null;
  busy = false;

  private listeners: Listener[] = [];

  constructor(readonly client: ScenqClient) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  async listScenarios(): Promise<ScenarioSummary[]> {
    return this.client.listScenarios();
  }

  async loadScenario(id: string): Promise<void> {
    this.busy = true;
    this.lastError = null;
    this.emit();
    try {
      this.scenarioId = id;
      await this.refresh();
    } catch (error) {
      this.lastError = toSessionError(error, "load");
    } finally {
      this.busy = false;
      this.emit();
    }
  }

  /** Re-analyze the current scenario at the selected level. */
  async refresh(): Promise<void> {
    if (!this.scenarioId) return;
    const report = await this.client.analysis(this.scenarioId, {
      minDim: this.selectedLevel,
    });
    this.report = report;
    this.revision = report.revision;
    this.label = report.scenario.label;
    this.clampLevel();
    await this.refreshDiff();
    this.emit();
  }

  maxLevel(): number {
    return Math.max(this.report?.intersection.max_shared_face ?? 0, 0);
  }

  private clampLevel(): void {
    if (this.selectedLevel > this.maxLevel()) {
      this.selectedLevel = this.maxLevel();
    }
  }

  async setLevel(level: number): Promise<void> {
    this.selectedLevel = Math.max(0, level);
    this.clampLevel();
    if (!this.scenarioId) {
      this.emit();
      return;
    }
    // re-request so the rendered line graph is the service's, not a local cut
    this.report = await this.client.analysis(this.scenarioId, {
      minDim: this.selectedLevel,
    });
    this.emit();
  }

  stageEdits(edits: EditOp[]): void {
    this.drafts = this.drafts.concat(edits);
    this.lastError = null;
    this.emit();
  }

  discardDrafts(): void {
    this.drafts = [];
    this.emit();
  }

  /**
   * Commit staged drafts with the optimistic revision precondition.  On a
   * stale-revision conflict the drafts are rebased once onto the latest
   * revision; a second conflict (or any invariant violation) keeps the
   * drafts staged and records the error.
   */
  async commitDrafts(): Promise<boolean> {
    if (!this.scenarioId || this.drafts.length === 0) return false;
    this.busy = true;
    this.lastError = null;
    this.emit();
    try {
      try {
        await this.client.patchScenario(this.scenarioId, this.revision, this.drafts);
      } catch (error) {
        if (error instanceof ApiError && error.status === 409) {
          const latest = await this.client.getScenario(this.scenarioId);
          await this.client.patchScenario(
            this.scenarioId,
            latest.revision,
            this.drafts,
          );
        } else {
          throw error;
        }
      }
      this.drafts = [];
      await this.refresh();
      return true;
    } catch (error) {
      this.lastError = toSessionError(error, "commit", this.drafts);
      return false;
    } finally {
      this.busy = false;
      this.emit();
    }
  }

  /**
   * Pin the current state as the comparison baseline by snapshotting it
   * into a new server-side scenario, so the diff panel always renders a
   * service-computed comparison.
   */
  async pinBaseline(): Promise<void> {
    if (!this.scenarioId) return;
    this.busy = true;
    this.emit();
    try {
      const detail = await this.client.getScenario(this.scenarioId);
      const snapshot = {
        ...detail.scenario,
        label: `${detail.scenario.label || detail.id} (baseline)`,
      };
      const created = await this.client.createScenario(snapshot);
      this.baselineId = created.id;
      this.baselineStale = false;
      await this.refreshDiff();
    } catch (error) {
      this.lastError = toSessionError(error, "baseline");
    } finally {
      this.busy = false;
      this.emit();
    }
  }

  async refreshDiff(): Promise<void> {
    if (!this.baselineId || !this.scenarioId) {
      this.diff = null;
      return;
    }
    try {
      this.diff = await this.client.compare(this.baselineId, this.scenarioId);
      this.baselineStale = false;
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        this.diff = null;
        this.baselineStale = true;
      } else {
        throw error;
      }
    }
  }

  /** Classes at the selected level, straight from the report. */
  classesAtLevel(): string[][] {
    const levels = this.report?.classes["complex-threshold"] ?? [];
    return levels[this.selectedLevel]?.classes ?? [];
  }
}

function toSessionError(
  error: unknown,
  source: SessionError["source"],
  drafts?: EditOp[],
): SessionError {
  if (error instanceof ApiError) {
    const result: SessionError = {
      source,
      name: error.errorName,
      detail: error.detail,
    };
    if (drafts) {
      const index = offendingEditIndex(error.detail, drafts);
      if (index >= 0) result.editIndex = index;
    }
    return result;
  }
  return { source, name: "Error", detail: String(error) };
}

/** Best-effort match of a server error message to the edit that caused it. */
export function offendingEditIndex(detail: string, edits: EditOp[]): number {
  for (let i = 0; i < edits.length; i += 1) {
    const edit = edits[i];
    if (edit && detail.includes(`'${edit.id}'`)) return i;
  }
  return -1;
}
