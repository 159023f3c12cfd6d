/**
 * Trailing-edge rate limiter for slider traffic: at most `maxPerSecond`
 * sends per second, and the latest value always goes out eventually.
 */

export class RateLimiter<T> {
  private lastSent = -Infinity;
  private pending: T | undefined;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private readonly intervalMs: number;

  constructor(
    private readonly send: (value: T) => void,
    maxPerSecond = 10,
    private readonly now: () => number = () => Date.now(),
  ) {
    this.intervalMs = 1000 / maxPerSecond;
  }

  push(value: T): void {
    const t = this.now();
    if (t - this.lastSent >= this.intervalMs) {
      this.lastSent = t;
      this.send(value);
      return;
    }
    this.pending = value;
    if (this.timer === null) {
      const wait = this.intervalMs - (t - this.lastSent);
      this.timer = setTimeout(() => this.flush(), wait);
    }
  }

  flush(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    if (this.pending !== undefined) {
      this.lastSent = this.now();
      const value = this.pending;
      this.pending = undefined;
      this.send(value);
    }
  }
}
