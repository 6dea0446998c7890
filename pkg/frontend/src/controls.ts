/** Loop action dispatch with server-authoritative state.
 *
 * One mutation in flight per issue: while a request runs, further
 * clicks are ignored. A rejected action (409 and friends) surfaces the
 * server's detail and leaves the last known run untouched, so the UI
 * never drifts from what the engine accepted.
 */

import { ApiError, type CockpitApi, type OpenOptions } from "./api.js";
import type { RunInfo } from "./types.js";

export type ControlAction = "open" | "plan" | "approve" | "step" | "run-to-completion";

export interface ControlState {
  busy: boolean;
  run: RunInfo | null;
  notice: string | null;
}

export class LoopControls {
  private state: ControlState = { busy: false, run: null, notice: null };

  constructor(
    private readonly api: CockpitApi,
    readonly issue: string,
    private readonly onChange: (state: ControlState) => void = () => {},
  ) {}

  snapshot(): ControlState {
    return { ...this.state };
  }

  /** Dispatch one action; returns the new run or null when rejected
   * or ignored. */
  async invoke(action: ControlAction, options?: OpenOptions): Promise<RunInfo | null> {
    if (this.state.busy) {
      return null;
    }
    this.update({ busy: true, notice: null });
    try {
      const run = await this.call(action, options);
      this.update({ busy: false, run, notice: null });
      return run;
    } catch (error) {
      if (error instanceof ApiError) {
        // server refused; keep the run exactly as it was
        this.update({ busy: false, notice: `${error.code}: ${error.detail}` });
        return null;
      }
      this.update({ busy: false, notice: "service unreachable" });
      return null;
    }
  }

  private call(action: ControlAction, options?: OpenOptions): Promise<RunInfo> {
    switch (action) {
      case "open":
        return this.api.open(this.issue, options);
      case "plan":
        return this.api.plan(this.issue);
      case "approve":
        return this.api.approve(this.issue);
      case "step":
        return this.api.step(this.issue);
      case "run-to-completion":
        return this.api.runToCompletion(this.issue);
    }
  }

  private update(patch: Partial<ControlState>): void {
    this.state = { ...this.state, ...patch };
    this.onChange(this.snapshot());
  }
}
