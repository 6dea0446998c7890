/** DOM construction from view-models. No state lives here; every
 * function repaints its container from the data it is handed. */

import type { PhaseColumn } from "./board.js";
import type { ControlAction, ControlState } from "./controls.js";
import type { ChartModel } from "./prompts.js";
import type { CoverageReport, ImpactReport, LoopEvent } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function renderBoard(
  container: HTMLElement,
  columns: PhaseColumn[],
  selected: string | null,
  onSelect: (issueId: string) => void,
): void {
  container.replaceChildren();
  for (const column of columns) {
    const section = el("section", column.complete ? "phase complete" : "phase");
    const heading = el("h3", undefined, `${column.id} ${column.name}`);
    if (column.complete) {
      heading.append(el("span", "badge", "complete"));
    }
    section.append(heading, el("p", "goal", column.goal));
    if (column.dependsOn.length) {
      section.append(el("p", "deps", `after ${column.dependsOn.join(", ")}`));
    }
    const list = el("ul", "issues");
    for (const issue of column.issues) {
      const item = el("li", issue.blocked ? "issue blocked" : `issue ${issue.status}`);
      const button = el("button", issue.id === selected ? "select current" : "select");
      button.textContent = `${issue.id} ${issue.title}`;
      button.addEventListener("click", () => onSelect(issue.id));
      item.append(button);
      item.append(el("span", "status", issue.state ?? issue.status));
      if (issue.blocked) {
        item.append(el("span", "badge", "blocked"));
      }
      list.append(item);
    }
    section.append(list);
    container.append(section);
  }
}

const ACTIONS: ControlAction[] = ["open", "plan", "approve", "step", "run-to-completion"];

export function renderControls(
  container: HTMLElement,
  issue: string | null,
  state: ControlState,
  openable: boolean,
  onAction: (action: ControlAction) => void,
): void {
  container.replaceChildren();
  if (!issue) {
    container.append(el("p", "hint", "select an issue from the board"));
    return;
  }
  container.append(el("h3", undefined, issue));
  const run = state.run;
  const chip = el("span", "chip", run ? run.state : "not opened");
  container.append(chip);
  if (run) {
    container.append(el("span", "iteration", `iteration ${run.iteration}`));
    const passing = new Set(run.passing);
    const tests = el("ul", "constraints");
    for (const testId of run.constraint_test_ids) {
      tests.append(el("li", passing.has(testId) ? "pass" : "fail", testId));
    }
    container.append(tests);
  }
  const buttons = el("div", "actions");
  for (const action of ACTIONS) {
    const button = el("button", "action", action);
    button.disabled = state.busy || (action === "open" && !openable);
    button.addEventListener("click", () => onAction(action));
    buttons.append(button);
  }
  container.append(buttons);
  if (state.notice) {
    container.append(el("p", "notice", state.notice));
  }
}

export function renderPlan(container: HTMLElement, planText: string | null): void {
  container.replaceChildren();
  if (planText) {
    container.append(el("pre", "plan", planText));
  }
}

export function renderEvents(container: HTMLElement, events: readonly LoopEvent[]): void {
  container.replaceChildren();
  for (const event of events) {
    const item = el("li", `event ${event.kind}`);
    item.append(el("span", "seq", String(event.seq)));
    item.append(el("span", "kind", event.kind));
    const failed = event.payload.failed;
    if (event.kind === "tests_run" && Array.isArray(failed) && failed.length) {
      const details = el("details", "failures");
      details.append(el("summary", undefined, `${failed.length} failing`));
      const list = el("ul");
      for (const testId of failed) {
        list.append(el("li", "fail", String(testId)));
      }
      details.append(list);
      item.append(details);
    } else {
      item.append(el("span", "payload", JSON.stringify(event.payload)));
    }
    container.append(item);
  }
}

export function renderCoverage(container: HTMLElement, coverage: CoverageReport): void {
  container.replaceChildren();
  const ratios = el("ul", "ratios");
  for (const [name, value] of Object.entries(coverage.ratios)) {
    ratios.append(el("li", undefined, `${name}: ${(value * 100).toFixed(1)}%`));
  }
  container.append(ratios);
  const gaps: [string, string[]][] = [
    ["uncovered stories", coverage.uncovered_stories],
    ["uncovered requirements", coverage.uncovered_requirements],
    ["unconstrained tests", coverage.unconstrained_tests],
    ["unphased tests", coverage.unphased_tests],
  ];
  for (const [label, ids] of gaps) {
    if (ids.length) {
      container.append(el("p", "gap", `${label}: ${ids.join(", ")}`));
    }
  }
  if (gaps.every(([, ids]) => !ids.length)) {
    container.append(el("p", "gap none", "no coverage gaps"));
  }
}

export function renderImpact(container: HTMLElement, impact: ImpactReport | null): void {
  container.replaceChildren();
  if (!impact) {
    return;
  }
  const text = impact.impacted.length ? impact.impacted.join(", ") : "(no dependents)";
  container.append(el("p", "impact", `${impact.node} touches: ${text}`));
}

export function renderCharts(container: HTMLElement, charts: ChartModel[]): void {
  container.replaceChildren();
  for (const chart of charts) {
    const block = el("div", "chart");
    block.append(el("h4", undefined, `${chart.paradigm} (${chart.total} prompts)`));
    for (const bar of chart.bars) {
      const row = el("div", "bar-row");
      row.append(el("span", "label", bar.category));
      const bara = el("div", "bar");
      bara.style.width = `${bar.width}%`;
      row.append(bara);
      row.append(el("span", "value", `${bar.percent}%`));
      block.append(row);
    }
    container.append(block);
  }
}

export function showBanner(container: HTMLElement, message: string | null): void {
  container.textContent = message ?? "";
  container.hidden = message === null;
}
