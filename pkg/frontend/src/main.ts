/** Cockpit wiring: fetch, render, poll.
 *
 * All loop state comes back from the service after each action; the
 * client holds only what it was last given. Selecting an issue starts
 * a long-poll on its event feed; every successful action repaints the
 * board from a fresh issue snapshot.
 */

import { CockpitApi } from "./api.js";
import { buildBoard } from "./board.js";
import { LoopControls, type ControlAction, type ControlState } from "./controls.js";
import { EventLog, EventPoller } from "./events.js";
import { buildChart } from "./prompts.js";
import {
  renderBoard,
  renderCharts,
  renderControls,
  renderCoverage,
  renderEvents,
  renderImpact,
  renderPlan,
  showBanner,
} from "./render.js";
import type { IssueInfo, PhaseInfo } from "./types.js";

const api = new CockpitApi("");

interface Selection {
  issue: string;
  controls: LoopControls;
  log: EventLog;
  poller: EventPoller;
}

let phases: PhaseInfo[] = [];
let issues: IssueInfo[] = [];
let selection: Selection | null = null;

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node;
}

function paintBoard(): void {
  renderBoard(byId("board"), buildBoard(phases, issues), selection?.issue ?? null, selectIssue);
}

function paintControls(state: ControlState): void {
  const issue = selection?.issue ?? null;
  const info = issues.find((i) => i.id === issue);
  const openable = info ? info.status === "open" && !info.blocked : false;
  renderControls(byId("controls"), issue, state, openable, runAction);
  renderPlan(byId("plan"), selection ? selection.log.planText() : null);
}

function paintEvents(): void {
  renderEvents(byId("events"), selection ? selection.log.all() : []);
}

async function refreshIssues(): Promise<void> {
  issues = (await api.issues()).issues;
  paintBoard();
}

function selectIssue(issueId: string): void {
  if (selection) {
    if (selection.issue === issueId) {
      return;
    }
    selection.poller.stop();
  }
  const log = new EventLog();
  const controls = new LoopControls(api, issueId, paintControls);
  const poller = new EventPoller(
    (after, timeout) => api.events(issueId, after, timeout),
    log,
    () => {
      paintEvents();
      paintControls(controls.snapshot());
    },
    { timeoutS: 15, onError: () => showBanner(byId("banner"), "service unreachable, retrying") },
  );
  selection = { issue: issueId, controls, log, poller };
  paintBoard();
  paintControls(controls.snapshot());
  paintEvents();
  void poller.start();
}

async function runAction(action: ControlAction): Promise<void> {
  if (!selection) {
    return;
  }
  const run = await selection.controls.invoke(action);
  if (run) {
    await refreshIssues().catch(() => undefined);
  }
}

async function queryImpact(): Promise<void> {
  const input = byId("impact-query") as HTMLInputElement;
  const nodeId = input.value.trim();
  if (!nodeId) {
    renderImpact(byId("impact"), null);
    return;
  }
  try {
    renderImpact(byId("impact"), await api.impact(nodeId));
  } catch (error) {
    byId("impact").textContent = error instanceof Error ? error.message : String(error);
  }
}

async function bootstrap(): Promise<void> {
  try {
    const [summary, phasesPayload, issuesPayload, coverage, prompts] = await Promise.all([
      api.summary(),
      api.phases(),
      api.issues(),
      api.coverage(),
      api.prompts(),
    ]);
    showBanner(byId("banner"), null);
    byId("title").textContent = `${summary.name}: ${summary.issues.open} open / ${summary.issues.closed} closed issues`;
    phases = phasesPayload.phases;
    issues = issuesPayload.issues;
    paintBoard();
    renderCoverage(byId("coverage"), coverage);
    renderCharts(byId("prompts"), prompts.reports.map(buildChart));
    paintControls({ busy: false, run: null, notice: null });
  } catch {
    showBanner(byId("banner"), "service unreachable");
  }
}

byId("impact-run").addEventListener("click", () => void queryImpact());
void bootstrap();
