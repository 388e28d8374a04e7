/* tslint:disable */
/* eslint-disable */

export class Limit {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Sup-norm distance between the two profiles.
     */
    readonly distance: number;
    /**
     * Solution of `-Δ_q v = g`.
     */
    readonly limit: Float64Array;
    /**
     * `lambda^(-1/(q-1)) u_lambda` for the `beta = 0` problem.
     */
    readonly rescaled: Float64Array;
    readonly x: Float64Array;
}

export class Profile {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly iterations: number;
    /**
     * `u / (lambda^sigma d)` at the interior nodes `x[1..n]`.
     */
    readonly ratio: Float64Array;
    readonly supNorm: number;
    readonly u: Float64Array;
    readonly x: Float64Array;
}

export class Scaling {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly lambdas: Float64Array;
    /**
     * `u` at the probe node for every converged `lambda`.
     */
    readonly probe: Float64Array;
    readonly rSquared: number;
    /**
     * Fitted exponent over the top three decades.
     */
    readonly slope: number;
    /**
     * `1 / (q - 1 + beta)`
     */
    readonly target: number;
}

export function qLaplacianLimit(p: number, q: number, delta: number, lambda: number, n: number): Limit;

export function scalingSweep(p: number, q: number, beta: number, delta: number, lo: number, hi: number, n: number): Scaling;

export function solveProfile(p: number, q: number, beta: number, delta: number, lambda: number, n: number): Profile;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_limit_free: (a: number, b: number) => void;
    readonly __wbg_profile_free: (a: number, b: number) => void;
    readonly __wbg_scaling_free: (a: number, b: number) => void;
    readonly limit_distance: (a: number) => number;
    readonly limit_limit: (a: number) => [number, number];
    readonly limit_rescaled: (a: number) => [number, number];
    readonly limit_x: (a: number) => [number, number];
    readonly profile_iterations: (a: number) => number;
    readonly profile_ratio: (a: number) => [number, number];
    readonly profile_supNorm: (a: number) => number;
    readonly profile_u: (a: number) => [number, number];
    readonly profile_x: (a: number) => [number, number];
    readonly qLaplacianLimit: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly scalingSweep: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly scaling_lambdas: (a: number) => [number, number];
    readonly scaling_probe: (a: number) => [number, number];
    readonly scaling_rSquared: (a: number) => number;
    readonly scaling_slope: (a: number) => number;
    readonly scaling_target: (a: number) => number;
    readonly solveProfile: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly __externref_table_alloc: () => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
