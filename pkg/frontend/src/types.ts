/** Payload shapes of the service API. The cockpit renders these as
 * received and never derives loop or graph state on its own. */

export interface BundleSummary {
  name: string;
  counts: {
    requirements: number;
    stories: number;
    tests: number;
    adrs: number;
    phases: number;
    issues: number;
  };
  issues: { open: number; closed: number };
}

export interface PhaseInfo {
  id: string;
  name: string;
  goal: string;
  depends_on: string[];
  test_ids: string[];
}

export interface RunInfo {
  issue: string;
  state: string;
  iteration: number;
  constraint_test_ids: string[];
  passing: string[];
  event_count: number;
}

export interface IssueInfo {
  id: string;
  title: string;
  phase: string;
  status: "open" | "closed";
  constraint_test_ids: string[];
  blocked: boolean;
  run: RunInfo | null;
}

export interface LoopEvent {
  seq: number;
  ts: string;
  issue: string;
  kind: string;
  payload: Record<string, unknown>;
}

export interface CoverageReport {
  uncovered_stories: string[];
  uncovered_requirements: string[];
  unconstrained_tests: string[];
  unphased_tests: string[];
  ratios: Record<string, number>;
}

export interface ImpactReport {
  node: string;
  impacted: string[];
}

export interface CategoryRow {
  category: string;
  count: number;
  percent: number;
}

export interface PromptReport {
  paradigm: string;
  total: number;
  categories: CategoryRow[];
}
