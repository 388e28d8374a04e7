/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_limit_free: (a: number, b: number) => void;
export const __wbg_profile_free: (a: number, b: number) => void;
export const __wbg_scaling_free: (a: number, b: number) => void;
export const limit_distance: (a: number) => number;
export const limit_limit: (a: number) => [number, number];
export const limit_rescaled: (a: number) => [number, number];
export const limit_x: (a: number) => [number, number];
export const profile_iterations: (a: number) => number;
export const profile_ratio: (a: number) => [number, number];
export const profile_supNorm: (a: number) => number;
export const profile_u: (a: number) => [number, number];
export const profile_x: (a: number) => [number, number];
export const qLaplacianLimit: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const scalingSweep: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const scaling_lambdas: (a: number) => [number, number];
export const scaling_probe: (a: number) => [number, number];
export const scaling_rSquared: (a: number) => number;
export const scaling_slope: (a: number) => number;
export const scaling_target: (a: number) => number;
export const solveProfile: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const __externref_table_alloc: () => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
