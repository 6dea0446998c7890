/** Phase board view-model.
 *
 * Joins the server-ordered phase list with the issue list. Order is
 * taken from the server as-is; the client adds nothing but grouping.
 */

import type { IssueInfo, PhaseInfo } from "./types.js";

export interface IssueCard {
  id: string;
  title: string;
  status: "open" | "closed";
  blocked: boolean;
  /** Open control enabled: an unblocked, still-open issue. */
  openable: boolean;
  state: string | null;
}

export interface PhaseColumn {
  id: string;
  name: string;
  goal: string;
  dependsOn: string[];
  /** Every issue of the phase is closed (and there is at least one). */
  complete: boolean;
  issues: IssueCard[];
}

export function buildBoard(phases: PhaseInfo[], issues: IssueInfo[]): PhaseColumn[] {
  const byPhase = new Map<string, IssueInfo[]>();
  for (const issue of issues) {
    const bucket = byPhase.get(issue.phase);
    if (bucket) {
      bucket.push(issue);
    } else {
      byPhase.set(issue.phase, [issue]);
    }
  }

  return phases.map((phase) => {
    const members = byPhase.get(phase.id) ?? [];
    return {
      id: phase.id,
      name: phase.name,
      goal: phase.goal,
      dependsOn: phase.depends_on,
      complete: members.length > 0 && members.every((i) => i.status === "closed"),
      issues: members.map((issue) => ({
        id: issue.id,
        title: issue.title,
        status: issue.status,
        blocked: issue.blocked,
        openable: issue.status === "open" && !issue.blocked,
        state: issue.run ? issue.run.state : null,
      })),
    };
  });
}
