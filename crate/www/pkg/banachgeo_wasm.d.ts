/* tslint:disable */
/* eslint-disable */

/**
 * Lozanovskii factorization as JSON: of `spec` itself when `blocks` is
 * empty, else the block weights `α, β` of `(Σ ℓ_1^{n_k})` over `spec`.
 */
export function lozanovskii_weights(spec: string, blocks: Uint32Array): string;

/**
 * `n (|B| |B°|)^{1/n}` for `ℓ_p^n`, `n = 1..=max_n`, from the exact
 * volume formulas.
 */
export function santalo_curve(p: number, max_n: number): Float64Array;

/**
 * Boundary of the unit ball (or of its polar with `dual`) of a
 * two-dimensional space, as interleaved `x, y` coordinates.
 */
export function unit_ball_outline(spec: string, points: number, dual: boolean): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly lozanovskii_weights: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly santalo_curve: (a: number, b: number) => [number, number, number, number];
    readonly unit_ball_outline: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
