//! Four-phase crossover over relative relations.
//!
//! Until `n - 1` assignments succeed the child is assembled from, in order:
//! relations both parents share, relations either parent holds whose edges
//! are best buddies, each edge's most compatible partner (edges visited in a
//! random order), and finally random pairs of still-free edges. Shared and
//! best-buddy candidates are each dropped with a small probability, which is
//! the only mutation in the algorithm.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::assembly::AssemblyState;
use crate::chromosome::{Chromosome, Placement};
use crate::compat::CompatibilityTable;
use crate::error::{invalid, Result};
use crate::tile::{EdgeRef, RelativeRelation};

/// Random attempts before the free-edge phase falls back to an exhaustive sweep.
const RANDOM_ATTEMPTS_PER_STEP: usize = 4096;

pub fn crossover<R: Rng + ?Sized>(
    parent_a: &Chromosome,
    parent_b: &Chromosome,
    table: &CompatibilityTable,
    skip_prob: f64,
    rng: &mut R,
) -> Result<Chromosome> {
    let n = table.piece_count();
    if parent_a.piece_count() != n || parent_b.piece_count() != n {
        return Err(invalid!(
            "parents cover {} and {} pieces, table covers {n}",
            parent_a.piece_count(),
            parent_b.piece_count()
        ));
    }
    let mut state = AssemblyState::new(n);

    let mut common: Vec<RelativeRelation> = parent_a.relations().filter(|r| parent_b.contains(r)).collect();
    common.shuffle(rng);
    assign_with_skips(&mut state, &common, skip_prob, rng)?;

    if !state.is_complete() {
        let mut buddies: Vec<RelativeRelation> = parent_a
            .relations()
            .chain(parent_b.relations().filter(|r| !parent_a.contains(r)))
            .filter(|r| table.is_best_buddy_pair(r.first(), r.second()))
            .collect();
        buddies.shuffle(rng);
        assign_with_skips(&mut state, &buddies, skip_prob, rng)?;
    }

    if !state.is_complete() {
        let mut order: Vec<usize> = (0..4 * n).collect();
        order.shuffle(rng);
        for u in order {
            if state.is_complete() {
                break;
            }
            let e = EdgeRef::from_index(u);
            if state.is_assigned(e) {
                continue;
            }
            state.try_assign(RelativeRelation::new_unchecked(e, table.most_compatible(e)))?;
        }
    }

    complete_randomly(&mut state, rng)?;
    Ok(state.finalize()?.0)
}

fn assign_with_skips<R: Rng + ?Sized>(
    state: &mut AssemblyState,
    candidates: &[RelativeRelation],
    skip_prob: f64,
    rng: &mut R,
) -> Result<()> {
    for rel in candidates {
        if state.is_complete() {
            break;
        }
        if skip_prob > 0.0 && rng.random::<f64>() < skip_prob {
            continue;
        }
        state.try_assign(*rel)?;
    }
    Ok(())
}

/// Joins random pairs of free edges until the assembly is a single group.
///
/// A free edge always has an empty cell across it, so a detached piece can
/// always be attached and two groups can always be joined along some pair of
/// boundary edges; the exhaustive sweep is only a guard against long runs of
/// unlucky collisions.
pub fn complete_randomly<R: Rng + ?Sized>(state: &mut AssemblyState, rng: &mut R) -> Result<()> {
    let n = state.piece_count();
    let mut free: Vec<EdgeRef> = (0..4 * n).map(EdgeRef::from_index).filter(|e| !state.is_assigned(*e)).collect();
    while !state.is_complete() {
        let mut joined = false;
        for _ in 0..RANDOM_ATTEMPTS_PER_STEP {
            let i = rng.random_range(0..free.len());
            let e1 = free[i];
            if state.is_assigned(e1) {
                free.swap_remove(i);
                continue;
            }
            let j = rng.random_range(0..free.len());
            let e2 = free[j];
            if state.is_assigned(e2) {
                free.swap_remove(j);
                continue;
            }
            if e1.piece == e2.piece || (state.group_of(e1.piece).is_some() && state.group_of(e1.piece) == state.group_of(e2.piece)) {
                continue;
            }
            if state.try_assign(RelativeRelation::new_unchecked(e1, e2))?.is_accepted() {
                joined = true;
                break;
            }
        }
        if !joined {
            sweep_once(state)?;
        }
    }
    Ok(())
}

fn sweep_once(state: &mut AssemblyState) -> Result<()> {
    let n = state.piece_count();
    for u in 0..4 * n {
        let e1 = EdgeRef::from_index(u);
        if state.is_assigned(e1) {
            continue;
        }
        for v in u + 1..4 * n {
            let e2 = EdgeRef::from_index(v);
            if e1.piece == e2.piece || state.is_assigned(e2) {
                continue;
            }
            if state.try_assign(RelativeRelation::new_unchecked(e1, e2))?.is_accepted() {
                return Ok(());
            }
        }
    }
    Err(crate::Error::State(alloc::string::String::from("no feasible assignment left")))
}

/// A chromosome built from random assignments only.
pub fn random_chromosome<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<(Chromosome, Placement)> {
    if n == 0 {
        return Err(invalid!("no pieces"));
    }
    let mut state = AssemblyState::new(n);
    complete_randomly(&mut state, rng)?;
    state.finalize()
}
