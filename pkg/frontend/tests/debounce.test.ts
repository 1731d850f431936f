import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { debounce } from "../src/debounce.js";

describe("debounce", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
  });

  it("fires exactly once per settle window, with the last arguments", () => {
    const fn = vi.fn<(v: number) => void>();
    const d = debounce(fn, 300);

    // a slider drag: many rapid updates inside the window
    for (let v = 0; v <= 80; v += 5) {
      d.call(v);
      vi.advanceTimersByTime(40);
    }
    expect(fn).not.toHaveBeenCalled();

    vi.advanceTimersByTime(300);
    expect(fn).toHaveBeenCalledTimes(1);
    expect(fn).toHaveBeenCalledWith(80);
  });

  it("fires again after a second burst settles", () => {
    const fn = vi.fn<(v: string) => void>();
    const d = debounce(fn, 300);

    d.call("first");
    vi.advanceTimersByTime(300);
    d.call("second-a");
    d.call("second-b");
    vi.advanceTimersByTime(300);

    expect(fn).toHaveBeenCalledTimes(2);
    expect(fn).toHaveBeenNthCalledWith(1, "first");
    expect(fn).toHaveBeenNthCalledWith(2, "second-b");
  });

  it("does nothing before the wait elapses", () => {
    const fn = vi.fn();
    const d = debounce(fn, 300);
    d.call();
    vi.advanceTimersByTime(299);
    expect(fn).not.toHaveBeenCalled();
    vi.advanceTimersByTime(1);
    expect(fn).toHaveBeenCalledTimes(1);
  });

  it("cancel drops the pending call entirely", () => {
    const fn = vi.fn();
    const d = debounce(fn, 300);
    d.call();
    d.cancel();
    vi.advanceTimersByTime(1000);
    expect(fn).not.toHaveBeenCalled();
  });

  it("flush fires the pending call immediately and only once", () => {
    const fn = vi.fn<(v: number) => void>();
    const d = debounce(fn, 300);
    d.call(7);
    d.flush();
    expect(fn).toHaveBeenCalledTimes(1);
    expect(fn).toHaveBeenCalledWith(7);
    vi.advanceTimersByTime(1000);
    expect(fn).toHaveBeenCalledTimes(1);
  });

  it("flush with nothing pending is a no-op", () => {
    const fn = vi.fn();
    const d = debounce(fn, 300);
    d.flush();
    expect(fn).not.toHaveBeenCalled();
  });
});
