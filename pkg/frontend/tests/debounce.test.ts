import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { RateLimiter } from "../src/debounce.js";

describe("RateLimiter", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("caps 50 rapid pushes to at most 10 per second", () => {
    const sent: number[] = [];
    const limiter = new RateLimiter<number>((v) => sent.push(v), 10);
    for (let i = 0; i < 50; i++) {
      limiter.push(i);
      vi.advanceTimersByTime(5); // 50 moves over 250 ms
    }
    vi.advanceTimersByTime(1000);
    // 1.25 s window at 10 msg/s leaves at most 13 sends, far below 50.
    expect(sent.length).toBeLessThanOrEqual(13);
    expect(sent.length).toBeGreaterThanOrEqual(2);
  });

  it("always delivers the latest value (trailing edge)", () => {
    const sent: number[] = [];
    const limiter = new RateLimiter<number>((v) => sent.push(v), 10);
    for (let i = 0; i <= 20; i++) limiter.push(i);
    vi.advanceTimersByTime(200);
    expect(sent[sent.length - 1]).toBe(20);
  });

  it("sends an isolated value immediately", () => {
    const sent: number[] = [];
    const limiter = new RateLimiter<number>((v) => sent.push(v), 10);
    limiter.push(7);
    expect(sent).toEqual([7]);
  });

  it("never exceeds the rate in any sliding one-second window", () => {
    const times: number[] = [];
    const limiter = new RateLimiter<number>(() => times.push(Date.now()), 10);
    for (let i = 0; i < 300; i++) {
      limiter.push(i);
      vi.advanceTimersByTime(Math.floor(Math.random() * 30));
    }
    vi.advanceTimersByTime(1000);
    for (let i = 0; i < times.length; i++) {
      const inWindow = times.filter((t) => t >= times[i] && t < times[i] + 1000);
      expect(inWindow.length).toBeLessThanOrEqual(10);
    }
  });
});
