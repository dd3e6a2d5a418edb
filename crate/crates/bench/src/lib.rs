//! Benchmark inputs shared by the criterion targets.

use lingame::games::QTable;
use lingame::{LinearGame, OutputGroup};

/// Uniform game over `Z_d` with `f(u, v) = (u * v + u) mod d` on `m x m` questions.
pub fn dense_game(d: u64, m: usize) -> LinearGame {
    let f: Vec<Vec<usize>> = (0..m)
        .map(|u| (0..m).map(|v| (u * v + u) % d as usize).collect())
        .collect();
    LinearGame::from_tables(OutputGroup::cyclic(d).expect("d >= 2"), QTable::Uniform, &f)
        .expect("well-formed table")
}
