//! Sudoku grid generation, validation and solving.
//!
//! Grids are the cipher keys. Generation fills the diagonal sub-grids with
//! seeded random permutations of `1..=n` and completes the rest by
//! backtracking; both steps are deterministic in `(n, seed)`, so a recorded
//! seed always reproduces the same key grid.

use crate::error::{Error, Result};
use crate::prng::{Permutation, SplitMix64};
use std::fmt;

/// Cap on choice placements per generation attempt. A diagonal fill whose
/// search exceeds it is abandoned and redrawn, the same way genuinely
/// unsolvable fills are (dead-ends exist even at n = 4). Part of the
/// deterministic generation procedure: changing it changes the output grid
/// for heavy seeds.
const GENERATION_NODE_BUDGET: u64 = 20_000;

/// Diagonal redraws before generation gives up.
const MAX_GENERATION_ATTEMPTS: u32 = 100;

/// An `n` x `n` grid with `sqrt(n)` x `sqrt(n)` boxes. Cell value 0 means
/// empty; filled cells hold `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SudokuGrid {
    n: usize,
    box_size: usize,
    cells: Vec<u8>,
}

/// Result of a bounded backtracking search.
enum SearchOutcome {
    Solved(Vec<u8>),
    Unsolvable,
    BudgetExceeded,
}

impl SudokuGrid {
    /// Largest supported grid size (bitmask-backed solver, values fit `u8`).
    pub const MAX_N: usize = 100;

    fn check_size(n: usize) -> Result<usize> {
        let box_size = (n as f64).sqrt().round() as usize;
        if n < 4 || n > Self::MAX_N || box_size * box_size != n {
            return Err(Error::InvalidArgument(format!(
                "grid size must be a perfect square in 4..={}, got {n}",
                Self::MAX_N
            )));
        }
        Ok(box_size)
    }

    pub fn empty(n: usize) -> Result<Self> {
        let box_size = Self::check_size(n)?;
        Ok(Self {
            n,
            box_size,
            cells: vec![0; n * n],
        })
    }

    /// Builds a grid from row-major cells. Checks the value range, not the
    /// Sudoku constraints; use [`SudokuGrid::is_valid`] for those.
    pub fn from_cells(n: usize, cells: Vec<u8>) -> Result<Self> {
        let box_size = Self::check_size(n)?;
        if cells.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "expected {} cells for a {n}x{n} grid, got {}",
                n * n,
                cells.len()
            )));
        }
        if let Some(&bad) = cells.iter().find(|&&v| v as usize > n) {
            return Err(Error::InvalidArgument(format!(
                "cell value {bad} out of range 0..={n}"
            )));
        }
        Ok(Self { n, box_size, cells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_size(&self) -> usize {
        self.box_size
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.cells[row * self.n + col] = value;
    }

    fn box_index(&self, row: usize, col: usize) -> usize {
        (row / self.box_size) * self.box_size + col / self.box_size
    }

    /// True iff no row, column or box contains a duplicate nonzero value.
    /// Empty cells are ignored.
    pub fn is_valid(&self) -> bool {
        let n = self.n;
        let mut rows = vec![0u128; n];
        let mut cols = vec![0u128; n];
        let mut boxes = vec![0u128; n];
        for row in 0..n {
            for col in 0..n {
                let v = self.get(row, col);
                if v == 0 {
                    continue;
                }
                let bit = 1u128 << v;
                let b = self.box_index(row, col);
                if rows[row] & bit != 0 || cols[col] & bit != 0 || boxes[b] & bit != 0 {
                    return false;
                }
                rows[row] |= bit;
                cols[col] |= bit;
                boxes[b] |= bit;
            }
        }
        true
    }

    /// Strict validation: every cell filled and every constraint holds.
    pub fn is_solved(&self) -> bool {
        self.cells.iter().all(|&v| v != 0) && self.is_valid()
    }

    /// Deterministic backtracking search: row-major scan, candidates tried
    /// in ascending order. Returns the first solution, or `None` if the
    /// givens are contradictory or the puzzle is unsolvable.
    pub fn solve(&self) -> Option<SudokuGrid> {
        if !self.is_valid() {
            return None;
        }
        match self.search(None) {
            SearchOutcome::Solved(cells) => Some(Self {
                n: self.n,
                box_size: self.box_size,
                cells,
            }),
            _ => None,
        }
    }

    /// Counts solutions, stopping once `cap` have been found.
    pub fn solution_count(&self, cap: usize) -> usize {
        if !self.is_valid() || cap == 0 {
            return 0;
        }
        let mut masks = Masks::from_grid(self);
        let mut cells = self.cells.clone();
        let mut found = 0usize;
        count_rec(self, &mut cells, &mut masks, 0, cap, &mut found);
        found
    }

    fn search(&self, budget: Option<u64>) -> SearchOutcome {
        let mut state = SearchState::from_grid(self);
        if !state.propagate() {
            return SearchOutcome::Unsolvable;
        }
        let mut nodes = 0u64;
        match dfs(&state, budget, &mut nodes) {
            Some(Some(cells)) => SearchOutcome::Solved(cells),
            Some(None) => SearchOutcome::Unsolvable,
            None => SearchOutcome::BudgetExceeded,
        }
    }

    /// Generates a solved grid: the `box_size` diagonal sub-grids are filled
    /// with successive seeded permutations of `1..=n`, then backtracking
    /// completes the rest. Deterministic in `(n, seed)`.
    pub fn generate(n: usize, seed: u64) -> Result<SudokuGrid> {
        Ok(Self::generate_with_stats(n, seed)?.0)
    }

    /// [`SudokuGrid::generate`] plus the number of diagonal fills drawn.
    pub fn generate_with_stats(n: usize, seed: u64) -> Result<(SudokuGrid, u32)> {
        Self::check_size(n)?;
        let mut rng = SplitMix64::new(seed);
        for attempt in 1..=MAX_GENERATION_ATTEMPTS {
            let mut grid = Self::empty(n)?;
            grid.fill_diagonal_boxes(&mut rng);
            if let SearchOutcome::Solved(cells) = grid.search(Some(GENERATION_NODE_BUDGET)) {
                grid.cells = cells;
                return Ok((grid, attempt));
            }
        }
        Err(Error::InvalidArgument(format!(
            "sudoku generation for n={n} did not converge after {MAX_GENERATION_ATTEMPTS} attempts"
        )))
    }

    fn fill_diagonal_boxes(&mut self, rng: &mut SplitMix64) {
        let b = self.box_size;
        let mut values: Vec<u8> = (1..=self.n as u8).collect();
        for d in 0..b {
            rng.shuffle(&mut values);
            for (k, &v) in values.iter().enumerate() {
                self.set(d * b + k / b, d * b + k % b, v);
            }
        }
    }

    /// The chosen row as a 0-based permutation (each value decremented by
    /// one). Requires a solved grid: only then is a row guaranteed to be a
    /// permutation of `1..=n`.
    pub fn row_permutation(&self, row: usize) -> Result<Permutation> {
        if row >= self.n {
            return Err(Error::InvalidArgument(format!(
                "row {row} out of range for a {}x{} grid",
                self.n, self.n
            )));
        }
        if !self.is_solved() {
            return Err(Error::InvalidKey(
                "permutation row requested from an unsolved grid".into(),
            ));
        }
        let map = self.cells[row * self.n..(row + 1) * self.n]
            .iter()
            .map(|&v| v as usize - 1)
            .collect();
        Permutation::from_map(map)
    }

    /// Renders the grid text block: `sudoku n=<N>` then N rows of
    /// space-separated values, 0 for empty.
    pub fn to_text(&self) -> String {
        let mut out = format!("sudoku n={}\n", self.n);
        for row in 0..self.n {
            let line: Vec<String> = (0..self.n)
                .map(|col| self.get(row, col).to_string())
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the grid text block produced by [`SudokuGrid::to_text`].
    /// Error messages carry the 1-based line number within the block.
    pub fn from_text(text: &str) -> Result<SudokuGrid> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty grid block".into()))?;
        let n: usize = header
            .strip_prefix("sudoku n=")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| {
                Error::Format(format!("grid line 1: expected `sudoku n=<N>`, got `{header}`"))
            })?;
        Self::check_size(n)?;
        let mut cells = Vec::with_capacity(n * n);
        for row in 0..n {
            let line = lines.next().ok_or_else(|| {
                Error::Format(format!("grid line {}: missing row {row}", row + 2))
            })?;
            let values: Vec<&str> = line.split_whitespace().collect();
            if values.len() != n {
                return Err(Error::Format(format!(
                    "grid line {}: expected {n} values, got {}",
                    row + 2,
                    values.len()
                )));
            }
            for v in values {
                let value: u8 = v.parse().map_err(|_| {
                    Error::Format(format!("grid line {}: bad cell value `{v}`", row + 2))
                })?;
                if value as usize > n {
                    return Err(Error::Format(format!(
                        "grid line {}: cell value {value} out of range 0..={n}",
                        row + 2
                    )));
                }
                cells.push(value);
            }
        }
        Self::from_cells(n, cells)
    }
}

impl fmt::Display for SudokuGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Row/column/box occupancy bitmasks; bit `v` set means value `v` present.
#[derive(Clone)]
struct Masks {
    rows: Vec<u128>,
    cols: Vec<u128>,
    boxes: Vec<u128>,
}

impl Masks {
    fn from_grid(g: &SudokuGrid) -> Self {
        let n = g.n;
        let mut m = Self {
            rows: vec![0; n],
            cols: vec![0; n],
            boxes: vec![0; n],
        };
        for row in 0..n {
            for col in 0..n {
                let v = g.get(row, col);
                if v != 0 {
                    m.place(row, col, g.box_index(row, col), v);
                }
            }
        }
        m
    }

    fn place(&mut self, row: usize, col: usize, bx: usize, v: u8) {
        let bit = 1u128 << v;
        self.rows[row] |= bit;
        self.cols[col] |= bit;
        self.boxes[bx] |= bit;
    }

    fn remove(&mut self, row: usize, col: usize, bx: usize, v: u8) {
        let bit = !(1u128 << v);
        self.rows[row] &= bit;
        self.cols[col] &= bit;
        self.boxes[bx] &= bit;
    }

    fn allowed(&self, row: usize, col: usize, bx: usize, v: u8) -> bool {
        let bit = 1u128 << v;
        self.rows[row] & bit == 0 && self.cols[col] & bit == 0 && self.boxes[bx] & bit == 0
    }
}

/// Search state for the propagating solver. Cloned at every choice point;
/// forced placements never need undoing that way.
#[derive(Clone)]
struct SearchState {
    n: usize,
    box_size: usize,
    full: u128,
    cells: Vec<u8>,
    masks: Masks,
}

impl SearchState {
    fn from_grid(g: &SudokuGrid) -> Self {
        Self {
            n: g.n,
            box_size: g.box_size,
            full: (((1u128 << g.n) - 1) << 1), // bits 1..=n
            cells: g.cells.clone(),
            masks: Masks::from_grid(g),
        }
    }

    fn box_of(&self, row: usize, col: usize) -> usize {
        (row / self.box_size) * self.box_size + col / self.box_size
    }

    fn place(&mut self, idx: usize, v: u8) {
        let (row, col) = (idx / self.n, idx % self.n);
        self.cells[idx] = v;
        self.masks.place(row, col, self.box_of(row, col), v);
    }

    fn candidates(&self, idx: usize) -> u128 {
        let (row, col) = (idx / self.n, idx % self.n);
        self.full
            & !(self.masks.rows[row]
                | self.masks.cols[col]
                | self.masks.boxes[self.box_of(row, col)])
    }

    /// Fills every cell whose value is forced (single candidate, or the
    /// only spot for a value in its row/column/box) until a fixpoint.
    /// Returns false on contradiction. Forced cells are identical in every
    /// completion, so pruning here can never change which solution a
    /// row-major ascending search finds first.
    fn propagate(&mut self) -> bool {
        let n = self.n;
        loop {
            let mut changed = false;
            for idx in 0..n * n {
                if self.cells[idx] != 0 {
                    continue;
                }
                let cand = self.candidates(idx);
                if cand == 0 {
                    return false;
                }
                if cand.count_ones() == 1 {
                    self.place(idx, cand.trailing_zeros() as u8);
                    changed = true;
                }
            }
            for unit in 0..n {
                if !self.hidden_singles(unit_cells_row(n, unit), &mut changed)
                    || !self.hidden_singles(unit_cells_col(n, unit), &mut changed)
                    || !self.hidden_singles(unit_cells_box(n, self.box_size, unit), &mut changed)
                {
                    return false;
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Within one unit: any value that fits in exactly one empty cell gets
    /// placed; a value that fits nowhere (and is not already present) is a
    /// contradiction.
    fn hidden_singles(
        &mut self,
        cells: impl Iterator<Item = usize>,
        changed: &mut bool,
    ) -> bool {
        let mut present: u128 = 0;
        let mut seen_once: u128 = 0;
        let mut seen_many: u128 = 0;
        let mut slot = vec![0usize; self.n + 1];
        let mut unit_len = 0usize;
        for idx in cells {
            unit_len += 1;
            let v = self.cells[idx];
            if v != 0 {
                present |= 1u128 << v;
                continue;
            }
            let mut cand = self.candidates(idx);
            while cand != 0 {
                let v = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                let bit = 1u128 << v;
                if seen_once & bit != 0 {
                    seen_many |= bit;
                } else {
                    seen_once |= bit;
                    slot[v] = idx;
                }
            }
        }
        debug_assert_eq!(unit_len, self.n);
        let missing = self.full & !present;
        if missing & !seen_once != 0 {
            return false; // some value has no home
        }
        let mut forced = missing & seen_once & !seen_many;
        while forced != 0 {
            let v = forced.trailing_zeros() as usize;
            forced &= forced - 1;
            // an earlier placement in this sweep may have filled the slot
            if self.cells[slot[v]] == 0 && self.candidates(slot[v]) & (1u128 << v) != 0 {
                self.place(slot[v], v as u8);
                *changed = true;
            }
        }
        true
    }
}

fn unit_cells_row(n: usize, row: usize) -> impl Iterator<Item = usize> {
    (0..n).map(move |c| row * n + c)
}

fn unit_cells_col(n: usize, col: usize) -> impl Iterator<Item = usize> {
    (0..n).map(move |r| r * n + col)
}

fn unit_cells_box(n: usize, box_size: usize, bx: usize) -> impl Iterator<Item = usize> {
    let r0 = (bx / box_size) * box_size;
    let c0 = (bx % box_size) * box_size;
    (0..n).map(move |k| (r0 + k / box_size) * n + c0 + k % box_size)
}

/// Depth-first search over the remaining choice cells: first empty cell in
/// row-major order, candidate values ascending. `Some(Some(cells))` solved,
/// `Some(None)` exhausted, `None` budget ran out.
fn dfs(state: &SearchState, budget: Option<u64>, nodes: &mut u64) -> Option<Option<Vec<u8>>> {
    let Some(idx) = state.cells.iter().position(|&v| v == 0) else {
        return Some(Some(state.cells.clone()));
    };
    let mut cand = state.candidates(idx);
    while cand != 0 {
        let v = cand.trailing_zeros() as u8;
        cand &= cand - 1;
        *nodes += 1;
        if let Some(b) = budget {
            if *nodes > b {
                return None;
            }
        }
        let mut child = state.clone();
        child.place(idx, v);
        if child.propagate() {
            match dfs(&child, budget, nodes) {
                Some(Some(solved)) => return Some(Some(solved)),
                Some(None) => {}
                None => return None,
            }
        }
    }
    Some(None)
}

fn count_rec(
    g: &SudokuGrid,
    cells: &mut [u8],
    masks: &mut Masks,
    from: usize,
    cap: usize,
    found: &mut usize,
) {
    let n = g.n;
    let mut idx = from;
    while idx < n * n && cells[idx] != 0 {
        idx += 1;
    }
    if idx == n * n {
        *found += 1;
        return;
    }
    let (row, col) = (idx / n, idx % n);
    let bx = g.box_index(row, col);
    for v in 1..=n as u8 {
        if *found >= cap {
            return;
        }
        if !masks.allowed(row, col, bx, v) {
            continue;
        }
        cells[idx] = v;
        masks.place(row, col, bx, v);
        count_rec(g, cells, masks, idx + 1, cap, found);
        cells[idx] = 0;
        masks.remove(row, col, bx, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid4(cells: [u8; 16]) -> SudokuGrid {
        SudokuGrid::from_cells(4, cells.to_vec()).unwrap()
    }

    #[test]
    fn hand_checked_solved_4x4() {
        let g = grid4([1, 2, 3, 4, 3, 4, 1, 2, 2, 1, 4, 3, 4, 3, 2, 1]);
        assert!(g.is_valid());
        assert!(g.is_solved());
    }

    #[test]
    fn duplicate_in_row_invalid() {
        let g = grid4([1, 1, 3, 4, 3, 4, 1, 2, 2, 3, 4, 1, 4, 2, 1, 3]);
        assert!(!g.is_valid());
    }

    #[test]
    fn empty_grid_valid_but_not_solved() {
        let g = SudokuGrid::empty(9).unwrap();
        assert!(g.is_valid());
        assert!(!g.is_solved());
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(SudokuGrid::empty(7).is_err());
        assert!(SudokuGrid::empty(0).is_err());
        assert!(SudokuGrid::empty(2).is_err());
        assert!(SudokuGrid::empty(121).is_err());
    }

    #[test]
    fn solve_of_solved_grid_is_identity() {
        let g = grid4([1, 2, 3, 4, 3, 4, 1, 2, 2, 1, 4, 3, 4, 3, 2, 1]);
        assert_eq!(g.solve().unwrap(), g);
    }

    #[test]
    fn solve_restores_single_blank() {
        let solved = grid4([1, 2, 3, 4, 3, 4, 1, 2, 2, 1, 4, 3, 4, 3, 2, 1]);
        let mut blanked = solved.clone();
        blanked.set(2, 3, 0);
        assert_eq!(blanked.solve().unwrap(), solved);
    }

    #[test]
    fn contradictory_givens_unsolvable() {
        let g = grid4([1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert!(g.solve().is_none());
    }

    #[test]
    fn generate_is_deterministic_and_valid() {
        let a = SudokuGrid::generate(9, 7).unwrap();
        let b = SudokuGrid::generate(9, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.is_solved());
        assert_ne!(a, SudokuGrid::generate(9, 8).unwrap());
    }

    #[test]
    fn golden_generated_4x4() {
        // Frozen output of the deterministic generation procedure (this
        // seed dead-ends twice before the third diagonal fill completes).
        let (g, attempts) = SudokuGrid::generate_with_stats(4, 1).unwrap();
        assert!(g.is_solved());
        assert_eq!(attempts, 3);
        assert_eq!(
            g.cells(),
            &[3, 4, 1, 2, 2, 1, 4, 3, 1, 3, 2, 4, 4, 2, 3, 1],
            "generation procedure changed; grid was:\n{g}"
        );
    }

    #[test]
    fn generator_output_always_validates() {
        for seed in 0..100 {
            let g = SudokuGrid::generate(9, seed).unwrap();
            assert!(g.is_solved(), "seed {seed} produced an invalid grid");
        }
    }

    #[test]
    fn single_cell_corruptions_rejected() {
        let g = SudokuGrid::generate(9, 3).unwrap();
        let mut rng = SplitMix64::new(99);
        for _ in 0..100 {
            let idx = rng.next_index(81);
            let old = g.cells()[idx];
            let mut new = old;
            while new == old {
                new = rng.next_index(9) as u8 + 1;
            }
            let mut corrupted = g.clone();
            corrupted.cells[idx] = new;
            assert!(!corrupted.is_valid());
        }
    }

    #[test]
    fn row_permutation_examples() {
        let g = grid4([1, 2, 3, 4, 3, 4, 1, 2, 2, 1, 4, 3, 4, 3, 2, 1]);
        assert_eq!(g.row_permutation(0).unwrap().map(), &[0, 1, 2, 3]);
        assert_eq!(g.row_permutation(2).unwrap().map(), &[1, 0, 3, 2]);
        assert!(g.row_permutation(4).is_err());

        let unsolved = SudokuGrid::empty(4).unwrap();
        assert!(matches!(
            unsolved.row_permutation(0),
            Err(Error::InvalidKey(_))
        ));
    }

    #[test]
    fn text_round_trip() {
        let g = SudokuGrid::generate(9, 11).unwrap();
        let parsed = SudokuGrid::from_text(&g.to_text()).unwrap();
        assert_eq!(parsed, g);

        let mut blanked = g.clone();
        blanked.set(0, 0, 0);
        let parsed = SudokuGrid::from_text(&blanked.to_text()).unwrap();
        assert_eq!(parsed, blanked);
    }

    #[test]
    fn from_text_errors() {
        assert!(SudokuGrid::from_text("").is_err());
        assert!(SudokuGrid::from_text("sudoku n=4\n1 2 3\n").is_err());
        assert!(SudokuGrid::from_text("sudoku n=4\n1 2 3 9\n1 2 3 4\n1 2 3 4\n1 2 3 4\n").is_err());
        assert!(SudokuGrid::from_text("bogus\n").is_err());
    }

    #[test]
    fn solution_count_detects_uniqueness() {
        let solved = grid4([1, 2, 3, 4, 3, 4, 1, 2, 2, 1, 4, 3, 4, 3, 2, 1]);
        assert_eq!(solved.solution_count(2), 1);
        assert_eq!(SudokuGrid::empty(4).unwrap().solution_count(10), 10);
        let contradictory = grid4([1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(contradictory.solution_count(2), 0);
    }
}
