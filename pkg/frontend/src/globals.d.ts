// The SDK compiles without the DOM lib on purpose: everything it needs from
// the host goes through the structural interfaces in env.ts, which keeps the
// code honest and lets tests supply fakes. console is the one tolerated
// ambient global.
declare const console: {
  error(...args: unknown[]): void;
  warn(...args: unknown[]): void;
};
