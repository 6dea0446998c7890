/** Event feed: ordered, deduplicated accumulation plus a long-poll
 * driver with exponential backoff on failures.
 *
 * The server assigns strictly increasing sequence numbers per run;
 * the log keeps one entry per seq so reconnects never duplicate or
 * reorder what is already rendered.
 */

import type { LoopEvent } from "./types.js";

export class EventLog {
  private events: LoopEvent[] = [];
  private seen = new Set<number>();

  get lastSeq(): number {
    return this.events.length ? this.events[this.events.length - 1].seq : 0;
  }

  all(): readonly LoopEvent[] {
    return this.events;
  }

  /** Merge a batch, returning only the genuinely new events. */
  ingest(batch: LoopEvent[]): LoopEvent[] {
    const fresh = batch.filter((e) => !this.seen.has(e.seq));
    for (const event of fresh) {
      this.seen.add(event.seq);
    }
    if (!fresh.length) {
      return [];
    }
    this.events = [...this.events, ...fresh].sort((a, b) => a.seq - b.seq);
    return fresh;
  }

  /** The latest drafted plan text, if any event carried one. */
  planText(): string | null {
    for (let i = this.events.length - 1; i >= 0; i--) {
      const { kind, payload } = this.events[i];
      if (kind === "plan_drafted" && typeof payload.plan === "string") {
        return payload.plan;
      }
    }
    return null;
  }
}

export type EventsFetch = (after: number, timeoutS: number) => Promise<{ events: LoopEvent[] }>;

export interface PollerOptions {
  timeoutS?: number;
  baseDelayMs?: number;
  maxDelayMs?: number;
  sleep?: (ms: number) => Promise<void>;
  onError?: (error: unknown) => void;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export class EventPoller {
  private running = false;
  private delayMs: number;

  constructor(
    private readonly fetchEvents: EventsFetch,
    private readonly log: EventLog,
    private readonly onFresh: (fresh: LoopEvent[]) => void,
    private readonly options: PollerOptions = {},
  ) {
    this.delayMs = options.baseDelayMs ?? 500;
  }

  get active(): boolean {
    return this.running;
  }

  start(): Promise<void> {
    if (this.running) {
      return Promise.resolve();
    }
    this.running = true;
    return this.loop();
  }

  stop(): void {
    this.running = false;
  }

  private async loop(): Promise<void> {
    const timeoutS = this.options.timeoutS ?? 10;
    const base = this.options.baseDelayMs ?? 500;
    const max = this.options.maxDelayMs ?? 10_000;
    const sleep = this.options.sleep ?? defaultSleep;

    while (this.running) {
      try {
        const { events } = await this.fetchEvents(this.log.lastSeq, timeoutS);
        this.delayMs = base;
        const fresh = this.log.ingest(events);
        if (fresh.length) {
          this.onFresh(fresh);
        }
      } catch (error) {
        this.options.onError?.(error);
        await sleep(this.delayMs);
        this.delayMs = Math.min(this.delayMs * 2, max);
      }
    }
  }
}
