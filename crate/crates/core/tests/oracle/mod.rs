//! Slow, independent reference implementations used to check the engine.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use jigsaw_core::{EdgeLabel, EdgeRef, Piece};
use rand::Rng;

/// K×K×3 array, row-major.
pub type Pixels = Vec<Vec<[f64; 3]>>;

pub fn pixels_of(p: &Piece) -> Pixels {
    let k = p.side();
    (0..k).map(|r| (0..k).map(|c| p.pixel(r, c)).collect()).collect()
}

/// Physically turns the array a quarter turn clockwise.
pub fn turn_cw(px: &Pixels) -> Pixels {
    let k = px.len();
    (0..k).map(|r| (0..k).map(|c| px[k - 1 - c][r]).collect()).collect()
}

pub fn turn_cw_n(px: &Pixels, n: usize) -> Pixels {
    (0..n % 4).fold(px.clone(), |p, _| turn_cw(&p))
}

/// Root of summed squared differences across the seam: `a` on the left, `b` on the right, both already turned.
pub fn right_left(a: &Pixels, b: &Pixels) -> f64 {
    let k = a.len();
    let mut s = 0.0;
    for row in 0..k {
        for ch in 0..3 {
            let d = a[row][k - 1][ch] - b[row][0][ch];
            s += d * d;
        }
    }
    s.sqrt()
}

/// Dissimilarity of edge `ea` of `a` against edge `eb` of `b`: turn `a` so
/// `ea` is on the right and `b` so `eb` is on the left, then compare the seam.
/// Edge a (top) needs one clockwise turn to reach the right side.
pub fn dissimilarity(a: &Piece, ea: EdgeLabel, b: &Piece, eb: EdgeLabel) -> f64 {
    let ta = (5 - ea.index()) % 4;
    let tb = (7 - eb.index()) % 4;
    right_left(&turn_cw_n(&pixels_of(a), ta), &turn_cw_n(&pixels_of(b), tb))
}

/// Full `4n × 4n` matrix, `f64::INFINITY` within a piece.
pub fn matrix(pieces: &[Piece]) -> Vec<Vec<f64>> {
    let n = pieces.len();
    let mut m = vec![vec![f64::INFINITY; 4 * n]; 4 * n];
    for i in 0..4 * n {
        for j in 0..4 * n {
            if i / 4 != j / 4 {
                m[i][j] = dissimilarity(&pieces[i / 4], EdgeLabel::ALL[i % 4], &pieces[j / 4], EdgeLabel::ALL[j % 4]);
            }
        }
    }
    m
}

/// Argmin per row, ties to the smallest (piece, edge).
pub fn argmins(m: &[Vec<f64>]) -> Vec<usize> {
    m.iter()
        .map(|row| {
            let mut best = usize::MAX;
            for (j, &v) in row.iter().enumerate() {
                if v.is_finite() && (best == usize::MAX || v < row[best]) {
                    best = j;
                }
            }
            best
        })
        .collect()
}

/// Unordered mutual-argmin pairs as (lower index, higher index).
pub fn best_buddies(pieces: &[Piece]) -> HashSet<(usize, usize)> {
    let arg = argmins(&matrix(pieces));
    (0..arg.len()).filter(|&i| arg[arg[i]] == i && i < arg[i]).map(|i| (i, arg[i])).collect()
}

pub fn random_pieces<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<Piece> {
    (0..n)
        .map(|i| {
            let px = (0..k * k).map(|_| [rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()]).collect();
            Piece::new(i, k, px).unwrap()
        })
        .collect()
}

/// Cuts a smooth synthetic image into a rows×cols grid of upright pieces, in raster order.
pub fn gradient_pieces(rows: usize, cols: usize, k: usize) -> Vec<Piece> {
    let (h, w) = ((rows * k) as f64, (cols * k) as f64);
    (0..rows * cols)
        .map(|i| {
            let (r0, c0) = ((i / cols) * k, (i % cols) * k);
            let px = (0..k * k)
                .map(|j| {
                    let (y, x) = ((r0 + j / k) as f64, (c0 + j % k) as f64);
                    [y / h, x / w, 0.5 + 0.4 * ((x / 7.0).sin() * (y / 5.0).cos())]
                })
                .collect();
            Piece::new(i, k, px).unwrap()
        })
        .collect()
}

const OFFSETS: [(i64, i64); 4] = [(-1, 0), (0, 1), (1, 0), (0, -1)];

/// Independent chromosome check. Returns per-piece (row, col, quarter turns)
/// or a reason the links are not a valid complete solution.
pub fn validate_links(links: &[Option<EdgeRef>]) -> Result<Vec<(i64, i64, usize)>, String> {
    if links.len() % 4 != 0 || links.is_empty() {
        return Err("length is not a positive multiple of 4".into());
    }
    let n = links.len() / 4;
    for (i, l) in links.iter().enumerate() {
        if let Some(o) = l {
            if o.piece >= n {
                return Err(format!("entry {i} points out of range"));
            }
            if o.piece == i / 4 {
                return Err(format!("entry {i} links a piece to itself"));
            }
            if links[o.index()] != Some(EdgeRef::from_index(i)) {
                return Err(format!("entry {i} is not symmetric"));
            }
        }
    }
    let mut pose: Vec<Option<(i64, i64, usize)>> = vec![None; n];
    pose[0] = Some((0, 0, 0));
    let mut queue = VecDeque::from([0usize]);
    while let Some(p) = queue.pop_front() {
        let (r, c, rot) = pose[p].unwrap();
        for e in 0..4 {
            let Some(o) = links[4 * p + e] else { continue };
            let dir = (e + rot) % 4;
            let cell = (r + OFFSETS[dir].0, c + OFFSETS[dir].1);
            let want_rot = ((dir + 2) + 4 - o.edge.index()) % 4;
            match pose[o.piece] {
                None => {
                    pose[o.piece] = Some((cell.0, cell.1, want_rot));
                    queue.push_back(o.piece);
                }
                Some(q) if q == (cell.0, cell.1, want_rot) => {}
                Some(_) => return Err(format!("piece {} placed inconsistently", o.piece)),
            }
        }
    }
    let poses: Vec<_> = pose.into_iter().collect::<Option<_>>().ok_or("not connected")?;
    let mut grid = HashMap::new();
    for (p, &(r, c, _)) in poses.iter().enumerate() {
        if grid.insert((r, c), p).is_some() {
            return Err(format!("overlap at ({r}, {c})"));
        }
    }
    for (p, &(r, c, rot)) in poses.iter().enumerate() {
        for dir in 0..4 {
            let e = (dir + 4 - rot) % 4;
            let across = grid.get(&(r + OFFSETS[dir].0, c + OFFSETS[dir].1));
            match (across, links[4 * p + e]) {
                (Some(&q), Some(o)) if o.piece == q => {}
                (None, None) => {}
                _ => return Err(format!("edge {p}.{e} disagrees with geometry")),
            }
        }
    }
    Ok(poses)
}

/// Relation set as sorted (lower, higher) dense edge indices.
pub fn relation_set(links: &[Option<EdgeRef>]) -> Vec<(usize, usize)> {
    let mut v: Vec<_> = links
        .iter()
        .enumerate()
        .filter_map(|(i, l)| l.map(|o| (i.min(o.index()), i.max(o.index()))))
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}
