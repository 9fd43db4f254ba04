//! Topology-preserving thinning.
//!
//! Border pixels are peeled one direction at a time (north, south, east,
//! west). A pixel is removed only when it is simple (removal changes neither
//! the 8-connected foreground nor the 4-connected background locally) and is
//! not a line end. Candidates of a sub-iteration are re-checked one by one
//! before removal so that parallel deletions cannot disconnect a stroke.

use std::sync::OnceLock;

use super::{BinaryMask, NEIGHBORS_8};

// 3x3 position of each neighbour bit, bit order as in NEIGHBORS_8
const BIT_POS: [(usize, usize); 8] = [(0, 0), (1, 0), (2, 0), (0, 1), (2, 1), (0, 2), (1, 2), (2, 2)];

fn simple_table() -> &'static [bool; 256] {
    static TABLE: OnceLock<[bool; 256]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [false; 256];
        for (config, slot) in table.iter_mut().enumerate() {
            *slot = compute_simple(config as u8);
        }
        table
    })
}

fn compute_simple(config: u8) -> bool {
    let mut grid = [[false; 3]; 3];
    for (bit, &(x, y)) in BIT_POS.iter().enumerate() {
        grid[y][x] = config & (1 << bit) != 0;
    }
    let fg = count_components(&grid, true, |_, _| true, true);
    // background components must touch one of the centre's 4-neighbours
    let bg = count_components(&grid, false, |x, y| (x == 1) != (y == 1), false);
    fg == 1 && bg == 1
}

fn count_components(grid: &[[bool; 3]; 3], value: bool, counts: impl Fn(usize, usize) -> bool, eight: bool) -> usize {
    let mut seen = [[false; 3]; 3];
    let mut n = 0;
    for sy in 0..3 {
        for sx in 0..3 {
            if (sx, sy) == (1, 1) || seen[sy][sx] || grid[sy][sx] != value {
                continue;
            }
            let mut touches = false;
            let mut stack = vec![(sx, sy)];
            seen[sy][sx] = true;
            while let Some((x, y)) = stack.pop() {
                touches |= counts(x, y);
                for (dx, dy) in NEIGHBORS_8 {
                    if !eight && dx != 0 && dy != 0 {
                        continue;
                    }
                    let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                    if !(0..3).contains(&nx) || !(0..3).contains(&ny) || (nx, ny) == (1, 1) {
                        continue;
                    }
                    let (nx, ny) = (nx as usize, ny as usize);
                    if !seen[ny][nx] && grid[ny][nx] == value {
                        seen[ny][nx] = true;
                        stack.push((nx, ny));
                    }
                }
            }
            if touches {
                n += 1;
            }
        }
    }
    n
}

fn neighborhood(mask: &BinaryMask, x: usize, y: usize) -> u8 {
    let mut config = 0u8;
    for (bit, (dx, dy)) in NEIGHBORS_8.iter().enumerate() {
        if mask.get_signed(x as i64 + dx, y as i64 + dy).unwrap_or(false) {
            config |= 1 << bit;
        }
    }
    config
}

/// Whether removing the foreground pixel at `(x, y)` preserves topology.
pub fn is_simple(mask: &BinaryMask, x: usize, y: usize) -> bool {
    simple_table()[neighborhood(mask, x, y) as usize]
}

fn removable(mask: &BinaryMask, x: usize, y: usize) -> bool {
    let config = neighborhood(mask, x, y);
    config.count_ones() != 1 && simple_table()[config as usize]
}

/// Thins every foreground region to a one-pixel-wide 8-connected skeleton.
pub fn skeletonize(mask: &BinaryMask) -> BinaryMask {
    let mut out = mask.clone();
    let mut live: Vec<(usize, usize)> = mask.foreground().collect();
    // N, S, E, W border directions
    const BORDERS: [(i64, i64); 4] = [(0, -1), (0, 1), (1, 0), (-1, 0)];
    let mut candidates = Vec::new();
    loop {
        let mut changed = false;
        for (dx, dy) in BORDERS {
            candidates.clear();
            for &(x, y) in &live {
                if !out.get(x, y) {
                    continue;
                }
                let border = !out.get_signed(x as i64 + dx, y as i64 + dy).unwrap_or(false);
                if border && removable(&out, x, y) {
                    candidates.push((x, y));
                }
            }
            for &(x, y) in &candidates {
                if removable(&out, x, y) {
                    out.set(x, y, false);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        live.retain(|&(x, y)| out.get(x, y));
    }
    out
}
