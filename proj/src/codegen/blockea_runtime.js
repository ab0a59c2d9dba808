'use strict';
// Runtime support for exported block programs. Mirrors the native engine
// draw for draw so that a bundle prints exactly what the engine prints for
// the same master seed. Needs only Node's standard library.

const os = require('os');

const MASK = (1n << 64n) - 1n;
const GAMMA = 0x9e3779b97f4a7c15n;
const MAX_SAFE = 9007199254740992;
const MAX_VALUE_SIZE = 2 ** 26;
const MAX_TASKS = 2 ** 20;

class Halt extends Error {
  constructor(reason, detail) {
    super(reason + ': ' + detail);
    this.reason = reason;
  }
}

function fmix(z) {
  z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & MASK;
  z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & MASK;
  return z ^ (z >> 31n);
}

function deriveSeed(seed, index) {
  return fmix((seed + GAMMA * ((index + 1n) & MASK)) & MASK);
}

class Rng {
  constructor(seed) {
    this.state = seed & MASK;
  }
  next() {
    this.state = (this.state + GAMMA) & MASK;
    return fmix(this.state);
  }
  belowBig(b) {
    const threshold = ((1n << 64n) - b) % b;
    for (;;) {
      const x = this.next();
      if (x >= threshold) return x % b;
    }
  }
  below(bound) {
    return Number(this.belowBig(BigInt(bound)));
  }
  unit() {
    return Number(this.next() >> 11n) * 2 ** -53;
  }
  bit() {
    return (this.next() >> 63n) === 1n;
  }
  bernoulli(p) {
    return this.unit() < p;
  }
}

function now() {
  return Number(process.hrtime.bigint()) / 1e6;
}

function newFrame(shared, seed, runId) {
  return {
    shared,
    rng: new Rng(seed),
    count: 0,
    best: null,
    bestBits: null,
    generation: 0,
    iterations: 0,
    lastRecord: 0,
    started: now(),
    scope: new Map(),
    runId,
    records: false,
    taskIndex: null,
    taskResult: undefined,
  };
}

// ---- values --------------------------------------------------------------

function int(v, what) {
  if (!Number.isFinite(v) || v !== Math.floor(v) || Math.abs(v) > MAX_SAFE) {
    throw new Halt('NotAnInteger', what + ' must be an integer, got ' + String(v));
  }
  return v;
}

function bitsText(x) {
  return x.join('');
}

function listText(list) {
  return '[' + list.map(String).join(', ') + ']';
}

function fromText(text) {
  if (text.length === 0) throw new Halt('BadCharacter', 'empty bit text');
  const bits = [];
  for (const c of text) {
    if (c !== '0' && c !== '1') throw new Halt('BadCharacter', "'" + c + "' is not a bit");
    bits.push(c === '1' ? 1 : 0);
  }
  return bits;
}

function getVar(ctx, name) {
  if (!ctx.scope.has(name)) throw new Halt('UnboundVariable', "variable '" + name + "' is not set");
  return ctx.scope.get(name);
}

function setVar(ctx, name, value) {
  ctx.scope.set(name, value);
}

function at(items, index, what) {
  const i = int(index, 'index');
  if (i < 0 || i >= items.length) throw new Halt('IndexOutOfRange', what + ' index ' + i);
  return items[i];
}

function randomInt(ctx, lo, hi) {
  if (lo > hi) throw new Halt('BadRange', lo + ' > ' + hi);
  const span = BigInt(hi) - BigInt(lo) + 1n;
  return Number(BigInt(lo) + ctx.rng.belowBig(span));
}

// ---- variation -----------------------------------------------------------

function tooLarge(what) {
  return new Halt('TooLarge', what + ' exceeds ' + MAX_VALUE_SIZE + ' elements');
}

function checkSize(pop) {
  let bits = 0;
  for (const x of pop) bits += x.length;
  if (bits > MAX_VALUE_SIZE) throw tooLarge('population');
  return pop;
}

function join(a, b) {
  if (a.length + b.length > MAX_VALUE_SIZE) throw tooLarge('text');
  return a + b;
}

function randomIndividual(ctx, length) {
  if (length > MAX_VALUE_SIZE) throw tooLarge('individual');
  if (length < 1) throw new Halt('BadLength', 'length must be >= 1');
  const bits = new Array(length);
  for (let i = 0; i < length; ++i) bits[i] = ctx.rng.bit() ? 1 : 0;
  return bits;
}

function randomPopulation(ctx, size, length) {
  if (length < 1) throw new Halt('BadLength', 'length must be >= 1');
  if (size < 0) throw new Halt('BadCount', 'population size must be >= 0');
  if (size > 0 && size > Math.floor(MAX_VALUE_SIZE / length)) throw tooLarge('population');
  const pop = [];
  for (let i = 0; i < size; ++i) pop.push(randomIndividual(ctx, length));
  return pop;
}

function sameLength(a, b) {
  if (a.length !== b.length) throw new Halt('LengthMismatch', 'parents differ in length');
}

function onePoint(ctx, a, b) {
  sameLength(a, b);
  const n = a.length;
  if (n < 2) throw new Halt('BadLength', 'one-point crossover needs n >= 2');
  const cut = 1 + ctx.rng.below(n - 1);
  return a.slice(0, cut).concat(b.slice(cut));
}

function twoPoint(ctx, a, b) {
  sameLength(a, b);
  const n = a.length;
  if (n < 3) throw new Halt('BadLength', 'two-point crossover needs n >= 3');
  let c1 = 1 + ctx.rng.below(n - 1);
  let c2 = 1 + ctx.rng.below(n - 2);
  if (c2 >= c1) ++c2;
  if (c1 > c2) [c1, c2] = [c2, c1];
  const bits = a.slice();
  for (let i = c1; i < c2; ++i) bits[i] = b[i];
  return bits;
}

function uniform(ctx, a, b) {
  sameLength(a, b);
  const bits = new Array(a.length);
  for (let i = 0; i < a.length; ++i) bits[i] = ctx.rng.bit() ? a[i] : b[i];
  return bits;
}

function mutatePerBit(ctx, x, p) {
  if (!(p >= 0 && p <= 1)) throw new Halt('BadProbability', 'p must lie in [0, 1]');
  const bits = x.slice();
  for (let i = 0; i < bits.length; ++i) {
    if (ctx.rng.bernoulli(p)) bits[i] ^= 1;
  }
  return bits;
}

function mutateKBits(ctx, x, k) {
  const n = x.length;
  if (k < 0 || k > n) throw new Halt('BadCount', 'k must lie in [0, ' + n + ']');
  const positions = Array.from({ length: n }, (_, i) => i);
  const bits = x.slice();
  for (let i = 0; i < k; ++i) {
    const j = i + ctx.rng.below(n - i);
    [positions[i], positions[j]] = [positions[j], positions[i]];
    bits[positions[i]] ^= 1;
  }
  return bits;
}

// ---- fitness -------------------------------------------------------------

function observe(ctx, x, v) {
  ++ctx.count;
  if (ctx.best === null || v > ctx.best) {
    ctx.best = v;
    ctx.bestBits = x;
  }
  return v;
}

function onesOf(x) {
  let ones = 0;
  for (const b of x) ones += b;
  return ones;
}

function leadingOf(x) {
  let prefix = 0;
  for (const b of x) {
    if (!b) break;
    ++prefix;
  }
  return prefix;
}

function jumpOf(x, k) {
  const n = x.length;
  if (k < 1 || k > n) throw new Halt('BadGap', 'jump gap must lie in [1, ' + n + ']');
  const ones = onesOf(x);
  if (ones <= n - k || ones === n) return k + ones;
  return n - ones;
}

function onemax(ctx, x) {
  return observe(ctx, x, onesOf(x));
}

function leadingOnes(ctx, x) {
  return observe(ctx, x, leadingOf(x));
}

function jump(ctx, x, k) {
  return observe(ctx, x, jumpOf(x, k));
}

function objective(ctx, kind, gap) {
  const k = int(gap, 'gap');
  if (kind === 'onemax') return (x) => onemax(ctx, x);
  if (kind === 'leading_ones') return (x) => leadingOnes(ctx, x);
  return (x) => jump(ctx, x, k);
}

function diversity(pop) {
  if (pop.length < 2) throw new Halt('TooSmall', 'diversity needs at least two members');
  const n = pop[0].length;
  for (const member of pop) {
    if (member.length !== n) throw new Halt('LengthMismatch', 'members differ in length');
  }
  const m = pop.length;
  let total = 0;
  for (let i = 0; i < n; ++i) {
    let ones = 0;
    for (const member of pop) ones += member[i];
    total += ones * (m - ones);
  }
  return total / ((m * (m - 1)) / 2);
}

// ---- populations ---------------------------------------------------------

function nonEmpty(pop) {
  if (pop.length === 0) throw new Halt('EmptyPopulation', 'population has no members');
}

function sortPop(f, pop) {
  const values = pop.map(f);
  const order = pop.map((_, i) => i);
  order.sort((l, r) => (values[l] > values[r] ? -1 : values[r] > values[l] ? 1 : 0));
  return order.map((i) => pop[i]);
}

function bestOf(f, pop) {
  nonEmpty(pop);
  let best = 0;
  let bestValue = f(pop[0]);
  for (let i = 1; i < pop.length; ++i) {
    const v = f(pop[i]);
    if (v > bestValue) {
      best = i;
      bestValue = v;
    }
  }
  return pop[best];
}

function selectUniform(ctx, pop) {
  nonEmpty(pop);
  return pop[ctx.rng.below(pop.length)];
}

function selectProportionate(ctx, f, pop) {
  nonEmpty(pop);
  const values = pop.map(f);
  let total = 0;
  for (const v of values) {
    if (v < 0) throw new Halt('NegativeFitness', 'fitness-proportionate selection needs f >= 0');
    total += v;
  }
  if (total <= 0) throw new Halt('AllZeroFitness', 'all members have zero fitness');
  const target = ctx.rng.unit() * total;
  let acc = 0;
  let lastPositive = 0;
  for (let i = 0; i < values.length; ++i) {
    if (values[i] <= 0) continue;
    acc += values[i];
    lastPositive = i;
    if (target < acc) return pop[i];
  }
  return pop[lastPositive];
}

function takeFirst(pop, k) {
  if (k < 0 || k > pop.length) throw new Halt('BadCount', 'k must lie in [0, ' + pop.length + ']');
  return pop.slice(0, k);
}

function add(pop, x) {
  return checkSize(pop.concat([x]));
}

function merge(a, b) {
  return checkSize(a.concat(b));
}

// ---- control -------------------------------------------------------------

function tick(ctx) {
  if (++ctx.iterations > ctx.shared.budget) {
    throw new Halt('BudgetExhausted', 'more than ' + ctx.shared.budget + ' loop iterations');
  }
}

function emit(ctx, line) {
  ctx.shared.write(line);
}

function maybeRecord(ctx) {
  if (!ctx.records || ctx.best === null || ctx.count <= ctx.lastRecord) return;
  ctx.lastRecord = ctx.count;
  emit(ctx, '[record] run=' + ctx.runId + ' generation=' + ctx.generation + ' evaluations=' + ctx.count +
    ' best=' + String(ctx.best));
}

function repeat(ctx, times, body) {
  if (times < 0) throw new Halt('BadCount', 'repeat count ' + times);
  for (let i = 0; i < times; ++i) {
    tick(ctx);
    body();
  }
}

function evolve(ctx, until, body, ioh) {
  if (ioh) maybeRecord(ctx);
  while (!until()) {
    tick(ctx);
    body();
    ++ctx.generation;
    if (ioh) maybeRecord(ctx);
  }
}

function repetitions(ctx, times, body) {
  if (times < 0) throw new Halt('BadCount', 'repetition count ' + times);
  if (times > MAX_TASKS) throw tooLarge('repetition count');
  const shared = ctx.shared;
  const first = shared.nextRun;
  shared.nextRun += times;
  for (let k = 0; k < times; ++k) {
    const runId = first + k;
    const run = newFrame(shared, deriveSeed(shared.seed, BigInt(runId)), runId);
    run.records = true;
    emit(run, '[run ' + runId + ' started]');
    body(run);
    emit(run, '[run ' + runId + ' finished] best=' + (run.best === null ? 'none' : bitsText(run.bestBits)) +
      ' fitness=' + (run.best === null ? 'none' : String(run.best)));
  }
}

function maxWorkers() {
  const env = process.env.BLOCKEA_MAX_WORKERS;
  if (env !== undefined && /^[0-9]+$/.test(env) && BigInt(env) > 0n) return Number(env);
  return 256;
}

// Tasks of a thread_run block execute one after another here; each still
// gets its own generator, counter and copy of the caller's variables.
function threadRun(ctx, count, workers, mode, body) {
  if (count < 0) throw new Halt('BadCount', 'thread task count ' + count);
  if (count > MAX_TASKS) throw tooLarge('thread task count');
  if (mode === 'limited' && workers < 1) throw new Halt('BadCount', 'worker count ' + workers);
  const base = ctx.rng.next();
  const results = [];
  if (count === 0) return results;
  if (mode === 'all' && count > maxWorkers()) {
    throw new Halt('WorkerLimit', 'Unlimited mode limited to ' + maxWorkers() + ' workers');
  }
  for (let i = 0; i < count; ++i) {
    const task = newFrame(ctx.shared, deriveSeed(base, BigInt(i)), ctx.runId);
    task.scope = new Map(ctx.scope);
    task.taskIndex = i;
    task.started = ctx.started;
    body(task);
    results.push(task.taskResult === undefined ? NaN : task.taskResult);
  }
  return results;
}

function fib(m) {
  return m < 2 ? m : fib(m - 1) + fib(m - 2);
}

function fibonacci(m) {
  if (m < 0 || m > 93) throw new Halt('BadCount', 'fibonacci argument must lie in [0, 93]');
  return fib(m);
}

function hardwareConcurrency() {
  const n = typeof os.availableParallelism === 'function' ? os.availableParallelism() : os.cpus().length;
  return n >= 1 ? n : 1;
}

function sleep(seconds) {
  if (!(seconds >= 0) || !Number.isFinite(seconds)) throw new Halt('BadDuration', 'cannot sleep ' + String(seconds) + ' s');
  const ms = seconds * 1000;
  if (ms > 0) Atomics.wait(new Int32Array(new SharedArrayBuffer(4)), 0, 0, ms);
}

function timer(ctx) {
  return now() - ctx.started;
}

function plot(ctx, style, series, x, y) {
  emit(ctx, '[plot ' + style + '] ' + series + ' ' + String(x) + ' ' + String(y));
}

function print(ctx, text) {
  emit(ctx, text);
}

// Runs a compiled program. Returns the process exit status: 0, or 3 after
// a runtime halt (reported as "[halt] <Reason>").
function execute(main, seed, budget, write) {
  const out = [];
  const sink = write || ((line) => out.push(line + '\n'));
  const shared = { seed: BigInt.asUintN(64, BigInt(seed)), budget, write: sink, nextRun: 0 };
  let status = 0;
  try {
    main(newFrame(shared, deriveSeed(shared.seed, MASK), -1));
  } catch (e) {
    if (!(e instanceof Halt)) throw e;
    sink('[halt] ' + e.reason);
    status = 3;
  }
  if (!write) process.stdout.write(out.join(''));
  return status;
}

module.exports = {
  Halt, Rng, deriveSeed, int, bitsText, listText, fromText, getVar, setVar, at, randomInt,
  randomIndividual, randomPopulation, onePoint, twoPoint, uniform, mutatePerBit, mutateKBits,
  onemax, leadingOnes, jump, objective, diversity, sortPop, bestOf, selectUniform, selectProportionate,
  takeFirst, add, merge, join, tick, repeat, evolve, repetitions, threadRun, fibonacci, hardwareConcurrency, sleep,
  timer, plot, print, execute,
};
