//! SO(3) Turaev–Viro invariants, through the RT bridge for Seifert symbols
//! and through the 6j state sum for closed triangulations.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{Color, RootContext};
use crate::rt::{rt_closed_with, InvariantValue, Method, Parallelism};
use crate::seifert::SeifertSymbol;
use crate::summation::{ComplexSum, NeumaierSum};
use crate::triangulation::{Triangulation, FACE_EDGES};

/// Relative bound on the imaginary part of a value that must be real.
pub const IMAGINARY_TOLERANCE: f64 = 1e-9;

/// A real Turaev–Viro value and the imaginary part left over by the complex arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TvValue {
    pub value: f64,
    pub imaginary_residue: f64,
    pub term_count: u64,
    pub term_magnitude_sum: f64,
    pub method: Method,
    pub r: u32,
}

impl TvValue {
    fn from_real_part(v: InvariantValue, method: Method) -> Result<Self> {
        let (re, im) = (v.value.re, v.value.im);
        if im.abs() >= IMAGINARY_TOLERANCE * (1.0 + re.abs()) {
            return Err(Error::Numeric(format!(
                "imaginary residue {im:e} on real part {re:e} at r = {}",
                v.r
            )));
        }
        Ok(TvValue {
            value: re,
            imaginary_residue: im,
            term_count: v.term_count,
            term_magnitude_sum: v.term_magnitude_sum,
            method,
            r: v.r,
        })
    }
}

/// `TV_r(S) = |RT_r(S)|²` for a closed symbol.
pub fn tv_closed(symbol: &SeifertSymbol, r: u32) -> Result<TvValue> {
    tv_closed_with(symbol, r, Parallelism::Sequential)
}

pub fn tv_closed_with(symbol: &SeifertSymbol, r: u32, mode: Parallelism) -> Result<TvValue> {
    let rt = rt_closed_with(symbol, r, mode)?;
    Ok(TvValue {
        value: rt.value.norm_sqr(),
        imaginary_residue: 0.0,
        term_count: rt.term_count,
        term_magnitude_sum: rt.term_magnitude_sum * rt.term_magnitude_sum,
        method: Method::Bridge,
        r,
    })
}

/// `TV_r(M) = η^{-χ(M)} RT_r(D(M))` with `χ(M) = 0`: the real part of `RT_r(D(M))`.
pub fn tv_bounded(symbol: &SeifertSymbol, r: u32) -> Result<TvValue> {
    tv_bounded_with(symbol, r, Parallelism::Sequential)
}

pub fn tv_bounded_with(symbol: &SeifertSymbol, r: u32, mode: Parallelism) -> Result<TvValue> {
    if !symbol.has_boundary() {
        return Err(Error::Domain(format!("{symbol} is closed; use tv_closed")));
    }
    let rt = rt_closed_with(&symbol.double()?, r, mode)?;
    TvValue::from_real_part(rt, Method::Bridge)
}

/// How the face terms `Δ(e₁,e₂,e₃)` enter the state sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceWeighting {
    /// No separate face factor: each face's `Δ` appears only inside the 6j
    /// symbols of its two tetrahedra. Reproduces `TV_r(S³) = η_r²`.
    #[default]
    Absorbed,
    /// Every coloring divided additionally by `Π_f Δ(f)`.
    Divided,
}

#[derive(Clone, Debug, Default)]
pub struct StateSumOptions {
    pub weighting: FaceWeighting,
    /// Order in which edge classes are assigned; `None` means `0, 1, 2, ...`.
    pub edge_order: Option<Vec<usize>>,
    pub parallelism: Parallelism,
}

/// Backtracking schedule: edge classes in assignment order and, for each
/// depth, the face triples whose last edge is assigned there.
struct Schedule {
    order: Vec<usize>,
    checks: Vec<Vec<[usize; 3]>>,
}

impl Schedule {
    fn new(tri: &Triangulation, order: Option<&[usize]>) -> Result<Self> {
        if !tri.is_closed() {
            return Err(Error::Unsupported(
                "state sums are only evaluated on closed triangulations".into(),
            ));
        }
        let e = tri.num_edges();
        let order: Vec<usize> = match order {
            None => (0..e).collect(),
            Some(o) => {
                let mut seen = vec![false; e];
                if o.len() != e
                    || o.iter()
                        .any(|&x| x >= e || std::mem::replace(&mut seen[x], true))
                {
                    return Err(Error::Precondition(format!(
                        "edge order must be a permutation of 0..{e}"
                    )));
                }
                o.to_vec()
            }
        };
        let mut position = vec![0; e];
        for (depth, &edge) in order.iter().enumerate() {
            position[edge] = depth;
        }
        let mut triples: Vec<[usize; 3]> = (0..tri.num_tetrahedra())
            .flat_map(|t| {
                let edges = tri.tet_edges(t);
                FACE_EDGES.map(|fe| {
                    let mut tr = fe.map(|k| edges[k]);
                    tr.sort_unstable();
                    tr
                })
            })
            .collect();
        triples.sort_unstable();
        triples.dedup();
        let mut checks = vec![Vec::new(); e];
        for tr in triples {
            let depth = tr.iter().map(|&x| position[x]).max().expect("three edges");
            checks[depth].push(tr);
        }
        Ok(Schedule { order, checks })
    }

    /// Calls `visit` for each admissible coloring whose first assigned edge has colour `first`.
    fn run<F: FnMut(&[Color])>(&self, ctx: &RootContext, first: Option<Color>, visit: &mut F) {
        let mut colors = vec![0 as Color; self.order.len()];
        if self.order.is_empty() {
            visit(&colors);
            return;
        }
        self.descend(ctx, 0, first, &mut colors, visit);
    }

    fn descend<F: FnMut(&[Color])>(
        &self,
        ctx: &RootContext,
        depth: usize,
        only: Option<Color>,
        colors: &mut [Color],
        visit: &mut F,
    ) {
        let edge = self.order[depth];
        for c in ctx.colors() {
            if only.is_some_and(|o| o != c) {
                continue;
            }
            colors[edge] = c;
            let ok = self.checks[depth]
                .iter()
                .all(|&[a, b, d]| ctx.admissible_unchecked(colors[a], colors[b], colors[d]));
            if !ok {
                continue;
            }
            if depth + 1 == self.order.len() {
                visit(colors);
            } else {
                self.descend(ctx, depth + 1, None, colors, visit);
            }
        }
    }
}

/// Every admissible coloring (indexed by edge class), lexicographic in edge-class order.
pub fn enumerate_admissible_colorings(
    tri: &Triangulation,
    ctx: &RootContext,
) -> Result<Vec<Vec<Color>>> {
    let schedule = Schedule::new(tri, None)?;
    let mut out = Vec::new();
    schedule.run(ctx, None, &mut |c| out.push(c.to_vec()));
    Ok(out)
}

/// Number of admissible colorings, without storing them.
pub fn count_admissible_colorings(tri: &Triangulation, ctx: &RootContext) -> Result<u64> {
    let schedule = Schedule::new(tri, None)?;
    let mut n = 0u64;
    schedule.run(ctx, None, &mut |_| n += 1);
    Ok(n)
}

struct Partial {
    sum: ComplexSum,
    magnitude: NeumaierSum,
    count: u64,
}

fn coloring_weight(
    tri: &Triangulation,
    ctx: &RootContext,
    faces: &[[usize; 3]],
    weighting: FaceWeighting,
    cache: &mut HashMap<[Color; 6], Complex64>,
    colors: &[Color],
) -> Complex64 {
    let mut w = Complex64::new(1.0, 0.0);
    for &c in colors {
        let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
        w *= sign * ctx.quantum_bracket(c as i64 + 1);
    }
    for t in 0..tri.num_tetrahedra() {
        let tuple = tri.tet_edges(t).map(|e| colors[e]);
        w *= *cache
            .entry(tuple)
            .or_insert_with(|| ctx.six_j_unchecked(tuple));
    }
    if weighting == FaceWeighting::Divided {
        for &[a, b, d] in faces {
            w /= ctx.delta_unchecked(colors[a], colors[b], colors[d]);
        }
    }
    w
}

/// The full complex state sum `η^{2|V|} Σ_c Π_e (-1)^c [c+1] Π_T 6j(T) [/ Π_f Δ(f)]`.
pub fn statesum_value(
    tri: &Triangulation,
    ctx: &RootContext,
    options: &StateSumOptions,
) -> Result<InvariantValue> {
    let schedule = Schedule::new(tri, options.edge_order.as_deref())?;
    let faces = tri.face_edge_classes();
    let partition = |first: Option<Color>| {
        let mut cache = HashMap::new();
        let mut p = Partial {
            sum: ComplexSum::new(),
            magnitude: NeumaierSum::new(),
            count: 0,
        };
        schedule.run(ctx, first, &mut |colors| {
            let w = coloring_weight(tri, ctx, &faces, options.weighting, &mut cache, colors);
            p.sum.add(w);
            p.magnitude.add(w.norm());
            p.count += 1;
        });
        p
    };
    let firsts: Vec<Option<Color>> = if schedule.order.is_empty() {
        vec![None]
    } else {
        ctx.colors().map(Some).collect()
    };
    let partials: Vec<Partial> = match options.parallelism {
        Parallelism::Sequential => firsts.into_iter().map(partition).collect(),
        Parallelism::Parallel => firsts.into_par_iter().map(partition).collect(),
    };
    let mut sum = ComplexSum::new();
    let mut magnitude = NeumaierSum::new();
    let mut count = 0;
    for p in &partials {
        sum.merge(&p.sum);
        magnitude.merge(&p.magnitude);
        count += p.count;
    }
    let scale = ctx.eta().powi(2 * tri.num_vertices() as i32);
    Ok(InvariantValue {
        value: sum.value() * scale,
        term_magnitude_sum: magnitude.value() * scale,
        term_count: count,
        method: Method::Statesum,
        r: ctx.r(),
        degenerate: false,
    })
}

/// `TV_r` of a closed triangulation, asserting the state sum is real.
pub fn tv_statesum(tri: &Triangulation, ctx: &RootContext) -> Result<TvValue> {
    tv_statesum_with(tri, ctx, &StateSumOptions::default())
}

pub fn tv_statesum_with(
    tri: &Triangulation,
    ctx: &RootContext,
    options: &StateSumOptions,
) -> Result<TvValue> {
    TvValue::from_real_part(statesum_value(tri, ctx, options)?, Method::Statesum)
}
