//! Exhaustive and sampled searches for permutations with few collinear
//! triples and for small Kakeya line families.
//!
//! Exhaustive searches are split into independent subtrees (tasks) in a
//! fixed canonical order. Tasks run in fixed-size batches; every task of a
//! batch starts from the incumbent left by the previous batch. The outcome,
//! including the explored node count, is therefore the same however a
//! [`BatchExecutor`] schedules the tasks of a batch.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::geometry::{directions, AffineLine};
use crate::incidence::{psi_fast, Permutation};
use crate::kakeya::{half_plane_count, LineFamily};
use crate::rng::Xoshiro256;

/// Most witnesses kept in a report.
pub const WITNESS_CAP: usize = 64;
/// Tasks per synchronization round. Fixed so results do not depend on the worker count.
pub const BATCH_SIZE: usize = 16;
pub const DEFAULT_PSI_CEILING: u32 = 11;
pub const DEFAULT_KAKEYA_CEILING: u32 = 7;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SearchError {
    #[error("field order {0} is even")]
    EvenOrder(u32),
    #[error("field order {q} exceeds the search ceiling {ceiling}")]
    OrderTooLarge { q: u32, ceiling: u32 },
    #[error("affine scale factors must be nonzero")]
    ZeroScale,
    #[error("at least one sample is required")]
    NoSamples,
    #[error(transparent)]
    Field(FieldError),
    #[error("witness {witness:?} evaluates to {value}, not the reported minimum {minimum}")]
    WitnessMismatch { witness: Vec<u32>, value: u64, minimum: u64 },
    #[error("minimum {} is below the lower bound {}", .0.minimum, .0.bound)]
    BoundViolated(Box<SearchReport>),
}

impl From<FieldError> for SearchError {
    fn from(e: FieldError) -> Self {
        SearchError::Field(e)
    }
}

/// The field of order `q` for a search, rejecting even orders up front.
pub fn search_field(q: u32) -> Result<Arc<FieldSpec>, SearchError> {
    if q % 2 == 0 {
        return Err(SearchError::EvenOrder(q));
    }
    Ok(Arc::new(FieldSpec::of_order(q)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    MinPsi,
    MinKakeya,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Random { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub q: u32,
    pub target: Target,
    pub mode: SearchMode,
    pub minimum: u64,
    pub bound: u64,
    pub attained_bound: bool,
    /// Canonical representatives in lexicographic order: normalized image
    /// lists for `MinPsi`, per-direction offsets for `MinKakeya`.
    pub witnesses: Vec<Vec<u32>>,
    pub witnesses_truncated: bool,
    /// Number of minimizers among the scanned representatives, when enumerated.
    pub witness_total: Option<u64>,
    pub explored: u64,
}

/// Lower bound on the collinear triple count: (q - 1) / 2.
pub fn psi_bound(q: u32) -> u64 {
    (q as u64 - 1) / 2
}

/// Lower bound on a planar Kakeya set: q (q + 1) / 2 + (q - 1) / 2.
pub fn kakeya_bound(q: u32) -> u64 {
    half_plane_count(q) + (q as u64 - 1) / 2
}

impl SearchReport {
    /// Re-evaluates every witness and checks the lower bound.
    fn finish(
        field: &Arc<FieldSpec>,
        target: Target,
        mode: SearchMode,
        merged: Merged,
        enumerate: bool,
    ) -> Result<Self, SearchError> {
        let q = field.order();
        let minimum = merged.best.expect("the search space is never empty");
        for w in &merged.witnesses {
            let value = match target {
                Target::MinPsi => psi_fast(
                    &Permutation::new(field.clone(), w).expect("witnesses are permutations"),
                ),
                Target::MinKakeya => LineFamily::from_offsets(field.clone(), w)
                    .expect("witnesses are line families")
                    .union_size(),
            };
            if value != minimum {
                return Err(SearchError::WitnessMismatch { witness: w.clone(), value, minimum });
            }
        }
        let bound = match target {
            Target::MinPsi => psi_bound(q),
            Target::MinKakeya => kakeya_bound(q),
        };
        let report = SearchReport {
            q,
            target,
            mode,
            minimum,
            bound,
            attained_bound: minimum == bound,
            witnesses_truncated: merged.total > merged.witnesses.len() as u64,
            witness_total: enumerate.then_some(merged.total),
            witnesses: merged.witnesses,
            explored: merged.explored,
        };
        if report.minimum < report.bound {
            return Err(SearchError::BoundViolated(Box::new(report)));
        }
        Ok(report)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub ceiling: u32,
    /// Keep every minimizer (up to the cap) instead of one.
    pub enumerate_witnesses: bool,
    /// Branch and bound; when false every leaf is visited.
    pub prune: bool,
    /// Restrict to the canonical representatives of the symmetry reduction.
    pub normalize: bool,
}

impl SearchConfig {
    pub fn for_target(target: Target) -> Self {
        SearchConfig {
            ceiling: match target {
                Target::MinPsi => DEFAULT_PSI_CEILING,
                Target::MinKakeya => DEFAULT_KAKEYA_CEILING,
            },
            enumerate_witnesses: false,
            prune: true,
            normalize: true,
        }
    }
}

/// Result of one subtree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TaskOutcome {
    /// Best value found within the task's admission bound, if any.
    pub best: Option<u64>,
    pub witnesses: Vec<Vec<u32>>,
    pub witness_total: u64,
    pub explored: u64,
}

/// A search space split into independently solvable subtrees.
pub trait SubtreeSearch: Sync {
    fn task_count(&self) -> usize;

    /// Solves task `task`, admitting only values `<= incumbent` when
    /// enumerating witnesses and `< incumbent` otherwise.
    fn solve(&self, task: usize, incumbent: Option<u64>) -> TaskOutcome;
}

/// Runs one batch of tasks; results must come back in task order.
pub trait BatchExecutor {
    fn run_batch<S: SubtreeSearch>(
        &self,
        search: &S,
        tasks: Range<usize>,
        incumbent: Option<u64>,
    ) -> Vec<TaskOutcome>;
}

pub struct Sequential;

impl BatchExecutor for Sequential {
    fn run_batch<S: SubtreeSearch>(
        &self,
        search: &S,
        tasks: Range<usize>,
        incumbent: Option<u64>,
    ) -> Vec<TaskOutcome> {
        tasks.map(|t| search.solve(t, incumbent)).collect()
    }
}

#[derive(Clone, Debug, Default)]
struct Merged {
    best: Option<u64>,
    witnesses: Vec<Vec<u32>>,
    total: u64,
    explored: u64,
}

impl Merged {
    fn absorb(&mut self, o: TaskOutcome, enumerate: bool) {
        self.explored += o.explored;
        let Some(v) = o.best else { return };
        match self.best {
            Some(b) if v > b => {}
            Some(b) if v == b => {
                if enumerate {
                    self.total += o.witness_total;
                    self.witnesses.extend(o.witnesses);
                    self.witnesses.truncate(WITNESS_CAP);
                }
            }
            _ => {
                self.best = Some(v);
                self.total = o.witness_total;
                self.witnesses = o.witnesses;
                self.witnesses.truncate(WITNESS_CAP);
            }
        }
    }
}

fn drive<S: SubtreeSearch, E: BatchExecutor>(search: &S, exec: &E, enumerate: bool) -> Merged {
    let mut merged = Merged::default();
    let n = search.task_count();
    let mut start = 0;
    while start < n {
        let end = (start + BATCH_SIZE).min(n);
        let outcomes = exec.run_batch(search, start..end, merged.best);
        debug_assert_eq!(outcomes.len(), end - start);
        for o in outcomes {
            merged.absorb(o, enumerate);
        }
        start = end;
    }
    merged
}

/// Collects leaves of one subtree under an admission bound.
struct Incumbent {
    bound: u64,
    strict: bool,
    enumerate: bool,
    found: Option<u64>,
    witnesses: Vec<Vec<u32>>,
    total: u64,
}

impl Incumbent {
    fn new(incumbent: Option<u64>, enumerate: bool) -> Self {
        Incumbent {
            bound: incumbent.unwrap_or(u64::MAX),
            strict: !enumerate && incumbent.is_some(),
            enumerate,
            found: None,
            witnesses: Vec::new(),
            total: 0,
        }
    }

    /// Whether a subtree whose values are all `>= lower` can still contribute.
    #[inline]
    fn admits(&self, lower: u64) -> bool {
        if self.strict {
            lower < self.bound
        } else {
            lower <= self.bound
        }
    }

    fn offer(&mut self, value: u64, leaf: impl FnOnce() -> Vec<u32>) {
        if !self.admits(value) {
            return;
        }
        if self.found == Some(value) {
            self.total += 1;
            if self.enumerate && self.witnesses.len() < WITNESS_CAP {
                self.witnesses.push(leaf());
            }
            return;
        }
        // Strictly better than anything admitted so far.
        self.found = Some(value);
        self.bound = value;
        self.strict = !self.enumerate;
        self.total = 1;
        self.witnesses.clear();
        self.witnesses.push(leaf());
    }

    fn into_outcome(self, explored: u64) -> TaskOutcome {
        TaskOutcome {
            best: self.found,
            witnesses: self.witnesses,
            witness_total: self.total,
            explored,
        }
    }
}

/// Injective extensions of `fixed` by `depth` more values from `0..q`, in lexicographic order.
fn injective_prefixes(q: u32, fixed: &[u32], depth: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = fixed.to_vec();
    fn rec(q: u32, depth: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if depth == 0 {
            out.push(cur.clone());
            return;
        }
        for v in 0..q {
            if !cur.contains(&v) {
                cur.push(v);
                rec(q, depth - 1, cur, out);
                cur.pop();
            }
        }
    }
    rec(q, depth, &mut cur, &mut out);
    out
}

/// Branch and bound over permutations, minimizing the collinear triple count.
///
/// Domain indices are assigned in order 0, 1, 2, ... When point `k` is placed
/// the new triples are those with two earlier points on a common line
/// through it: grouping the earlier points by slope seen from `k`, a class of
/// size `c` adds C(c, 2). The partial count never decreases, so it is an
/// admissible bound.
pub struct PsiSearch {
    field: Arc<FieldSpec>,
    prefixes: Vec<Vec<u32>>,
    /// `inv_dx[k * q + i] = 1 / (x_k - x_i)` for `i < k`.
    inv_dx: Vec<FieldElement>,
    prune: bool,
    enumerate: bool,
}

impl PsiSearch {
    pub fn new(field: Arc<FieldSpec>, config: &SearchConfig) -> Self {
        let q = field.order();
        let fixed: &[u32] = if config.normalize { &[0, 1] } else { &[] };
        let depth = 2.min(q as usize - fixed.len());
        let prefixes = injective_prefixes(q, fixed, depth);
        let mut inv_dx = vec![FieldElement::ZERO; (q * q) as usize];
        for k in field.elements() {
            for i in field.elements().take(k.index() as usize) {
                inv_dx[(k.index() * q + i.index()) as usize] =
                    field.inv(field.sub(k, i)).expect("distinct elements");
            }
        }
        PsiSearch {
            field,
            prefixes,
            inv_dx,
            prune: config.prune,
            enumerate: config.enumerate_witnesses,
        }
    }
}

struct PsiState<'a> {
    search: &'a PsiSearch,
    q: u32,
    images: Vec<FieldElement>,
    used: Vec<bool>,
    slope_count: Vec<u32>,
    slopes: Vec<u32>,
    explored: u64,
}

impl PsiState<'_> {
    /// Triples completed by placing `y` at position `images.len()`.
    #[inline]
    fn delta(&mut self, y: FieldElement) -> u64 {
        let f = &*self.search.field;
        let k = self.images.len();
        let row = &self.search.inv_dx[k * self.q as usize..];
        let mut added = 0u64;
        self.slopes.clear();
        for (i, &yi) in self.images.iter().enumerate() {
            let s = f.mul(f.sub(y, yi), row[i]).index();
            let c = &mut self.slope_count[s as usize];
            added += *c as u64;
            *c += 1;
            self.slopes.push(s);
        }
        for &s in &self.slopes {
            self.slope_count[s as usize] = 0;
        }
        added
    }

    fn dfs(&mut self, partial: u64, inc: &mut Incumbent) {
        self.explored += 1;
        if self.images.len() == self.q as usize {
            let images = &self.images;
            inc.offer(partial, || images.iter().map(|e| e.index()).collect());
            return;
        }
        for v in 0..self.q {
            if self.used[v as usize] {
                continue;
            }
            let y = FieldElement::from_index_unchecked(v);
            let next = partial + self.delta(y);
            if self.search.prune && !inc.admits(next) {
                continue;
            }
            self.used[v as usize] = true;
            self.images.push(y);
            self.dfs(next, inc);
            self.images.pop();
            self.used[v as usize] = false;
        }
    }
}

impl SubtreeSearch for PsiSearch {
    fn task_count(&self) -> usize {
        self.prefixes.len()
    }

    fn solve(&self, task: usize, incumbent: Option<u64>) -> TaskOutcome {
        let q = self.field.order();
        let mut st = PsiState {
            search: self,
            q,
            images: Vec::with_capacity(q as usize),
            used: vec![false; q as usize],
            slope_count: vec![0; q as usize],
            slopes: Vec::with_capacity(q as usize),
            explored: 0,
        };
        let mut inc = Incumbent::new(incumbent, self.enumerate);
        let mut partial = 0;
        for &v in &self.prefixes[task] {
            let y = FieldElement::from_index_unchecked(v);
            partial += st.delta(y);
            st.used[v as usize] = true;
            st.images.push(y);
        }
        if !self.prune || inc.admits(partial) {
            st.dfs(partial, &mut inc);
        } else {
            st.explored = 1;
        }
        inc.into_outcome(st.explored)
    }
}

/// Exact minimum of the triple count over all permutations of `field`.
pub fn min_psi_exhaustive(
    field: &Arc<FieldSpec>,
    enumerate_witnesses: bool,
) -> Result<SearchReport, SearchError> {
    let config = SearchConfig {
        enumerate_witnesses,
        ..SearchConfig::for_target(Target::MinPsi)
    };
    min_psi_exhaustive_with(field, &config, &Sequential)
}

pub fn min_psi_exhaustive_with<E: BatchExecutor>(
    field: &Arc<FieldSpec>,
    config: &SearchConfig,
    exec: &E,
) -> Result<SearchReport, SearchError> {
    check_order(field, config.ceiling)?;
    let search = PsiSearch::new(field.clone(), config);
    let merged = drive(&search, exec, config.enumerate_witnesses);
    SearchReport::finish(
        field,
        Target::MinPsi,
        SearchMode::Exhaustive,
        merged,
        config.enumerate_witnesses,
    )
}

fn check_order(field: &FieldSpec, ceiling: u32) -> Result<(), SearchError> {
    let q = field.order();
    if q % 2 == 0 {
        return Err(SearchError::EvenOrder(q));
    }
    if q > ceiling {
        return Err(SearchError::OrderTooLarge { q, ceiling });
    }
    Ok(())
}

/// A uniformly random permutation drawn with the pinned generator.
pub fn random_permutation(field: &Arc<FieldSpec>, rng: &mut Xoshiro256) -> Permutation {
    let images: Vec<FieldElement> = rng
        .shuffled(field.order())
        .into_iter()
        .map(FieldElement::from_index_unchecked)
        .collect();
    Permutation::from_trusted(field.clone(), images)
}

/// Minimum of the triple count over `samples` random permutations.
///
/// Witnesses are the distinct normalized forms of the minimizing draws.
pub fn min_psi_random(
    field: &Arc<FieldSpec>,
    samples: u64,
    seed: u64,
) -> Result<SearchReport, SearchError> {
    check_order(field, u32::MAX)?;
    if samples == 0 {
        return Err(SearchError::NoSamples);
    }
    let mut rng = Xoshiro256::seed_from_u64(seed);
    let mut best = u64::MAX;
    let mut found: BTreeSet<Vec<u32>> = BTreeSet::new();
    for _ in 0..samples {
        let alpha = random_permutation(field, &mut rng);
        let v = psi_fast(&alpha);
        if v < best {
            best = v;
            found.clear();
        }
        if v == best {
            found.insert(normalize(&alpha).image_indices());
        }
    }
    let total = found.len() as u64;
    let merged = Merged {
        best: Some(best),
        witnesses: found.into_iter().take(WITNESS_CAP).collect(),
        total,
        explored: samples,
    };
    SearchReport::finish(field, Target::MinPsi, SearchMode::Random { samples, seed }, merged, true)
}

/// `beta(x) = a alpha(b x + c) + d`, then inverted if `invert`.
pub fn affine_transform(
    alpha: &Permutation,
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    d: FieldElement,
    invert: bool,
) -> Result<Permutation, SearchError> {
    if a.is_zero() || b.is_zero() {
        return Err(SearchError::ZeroScale);
    }
    let f = alpha.field();
    let images: Vec<FieldElement> = f
        .elements()
        .map(|x| f.add(f.mul(a, alpha.image(f.add(f.mul(b, x), c))), d))
        .collect();
    let beta = Permutation::from_trusted(alpha.field_arc().clone(), images);
    Ok(if invert { beta.inverse() } else { beta })
}

/// The representative `a alpha + d` of alpha's orbit with `0 -> 0` and `1 -> 1`.
pub fn normalize(alpha: &Permutation) -> Permutation {
    let f = alpha.field();
    let (y0, y1) = (alpha.image(FieldElement::ZERO), alpha.image(FieldElement::ONE));
    let a = f.inv(f.sub(y1, y0)).expect("alpha is injective");
    let d = f.neg(f.mul(a, y0));
    affine_transform(alpha, a, FieldElement::ONE, FieldElement::ZERO, d, false)
        .expect("nonzero scales")
}

/// Branch and bound over line families, minimizing the size of the union.
///
/// With normalization the vertical line is `x = 0` and the slope-0 line is
/// `y = 0`; translations act transitively on those two choices and preserve
/// the union size. A line whose direction is new meets each placed line in
/// one point, so with `m` lines placed the next line adds at least `q - m`
/// points; summing this over the remaining lines gives the pruning bound.
pub struct KakeyaSearch {
    field: Arc<FieldSpec>,
    /// Direction indices in placement order, with their forced offsets.
    fixed: Vec<(u32, u32)>,
    free: Vec<u32>,
    prefixes: Vec<Vec<u32>>,
    /// `cells[d * q + c]`: grid cells of the line with direction `d`, offset `c`.
    cells: Vec<Vec<u32>>,
    prune: bool,
    enumerate: bool,
}

impl KakeyaSearch {
    pub fn new(field: Arc<FieldSpec>, config: &SearchConfig) -> Self {
        let q = field.order();
        let (fixed, free): (Vec<(u32, u32)>, Vec<u32>) = if config.normalize {
            (vec![(q, 0), (0, 0)], (1..q).collect())
        } else {
            (Vec::new(), (0..=q).collect())
        };
        let depth = 2.min(free.len());
        let mut prefixes = vec![Vec::new()];
        for _ in 0..depth {
            prefixes = prefixes
                .into_iter()
                .flat_map(|p: Vec<u32>| {
                    (0..q).map(move |c| {
                        let mut p = p.clone();
                        p.push(c);
                        p
                    })
                })
                .collect();
        }
        let mut cells = Vec::with_capacity(((q + 1) * q) as usize);
        for d in directions(&field) {
            for c in field.elements() {
                let line = AffineLine::new(d, c);
                cells.push(line.points(&field).map(|p| p.grid_index(q) as u32).collect());
            }
        }
        KakeyaSearch {
            field,
            fixed,
            free,
            prefixes,
            cells,
            prune: config.prune,
            enumerate: config.enumerate_witnesses,
        }
    }
}

struct KakeyaState<'a> {
    search: &'a KakeyaSearch,
    q: u32,
    cover: Vec<u16>,
    size: u64,
    placed: u32,
    offsets: Vec<u32>,
    explored: u64,
}

impl KakeyaState<'_> {
    fn place(&mut self, d: u32, c: u32) {
        for &cell in &self.search.cells[(d * self.q + c) as usize] {
            let k = &mut self.cover[cell as usize];
            if *k == 0 {
                self.size += 1;
            }
            *k += 1;
        }
        self.offsets[d as usize] = c;
        self.placed += 1;
    }

    fn remove(&mut self, d: u32, c: u32) {
        for &cell in &self.search.cells[(d * self.q + c) as usize] {
            let k = &mut self.cover[cell as usize];
            *k -= 1;
            if *k == 0 {
                self.size -= 1;
            }
        }
        self.placed -= 1;
    }

    /// Smallest union size reachable from the current placement.
    fn lower_bound(&self) -> u64 {
        let q = self.q as u64;
        let total = q + 1;
        let m = self.placed as u64;
        self.size + (m..total).map(|j| q.saturating_sub(j)).sum::<u64>()
    }

    fn dfs(&mut self, depth: usize, inc: &mut Incumbent) {
        self.explored += 1;
        let free = &self.search.free;
        if depth == free.len() {
            let offsets = &self.offsets;
            inc.offer(self.size, || offsets.clone());
            return;
        }
        let d = free[depth];
        for c in 0..self.q {
            self.place(d, c);
            if !self.search.prune || inc.admits(self.lower_bound()) {
                self.dfs(depth + 1, inc);
            }
            self.remove(d, c);
        }
    }
}

impl SubtreeSearch for KakeyaSearch {
    fn task_count(&self) -> usize {
        self.prefixes.len()
    }

    fn solve(&self, task: usize, incumbent: Option<u64>) -> TaskOutcome {
        let q = self.field.order();
        let mut st = KakeyaState {
            search: self,
            q,
            cover: vec![0; (q * q) as usize],
            size: 0,
            placed: 0,
            offsets: vec![0; q as usize + 1],
            explored: 0,
        };
        let mut inc = Incumbent::new(incumbent, self.enumerate);
        for &(d, c) in &self.fixed {
            st.place(d, c);
        }
        let prefix = &self.prefixes[task];
        for (&d, &c) in self.free.iter().zip(prefix) {
            st.place(d, c);
        }
        if !self.prune || inc.admits(st.lower_bound()) {
            st.dfs(prefix.len(), &mut inc);
        } else {
            st.explored = 1;
        }
        inc.into_outcome(st.explored)
    }
}

/// Exact minimum size of a union of one line per direction.
pub fn min_kakeya_exhaustive(field: &Arc<FieldSpec>) -> Result<SearchReport, SearchError> {
    min_kakeya_exhaustive_with(field, &SearchConfig::for_target(Target::MinKakeya), &Sequential)
}

pub fn min_kakeya_exhaustive_with<E: BatchExecutor>(
    field: &Arc<FieldSpec>,
    config: &SearchConfig,
    exec: &E,
) -> Result<SearchReport, SearchError> {
    check_order(field, config.ceiling)?;
    let search = KakeyaSearch::new(field.clone(), config);
    let merged = drive(&search, exec, config.enumerate_witnesses);
    SearchReport::finish(
        field,
        Target::MinKakeya,
        SearchMode::Exhaustive,
        merged,
        config.enumerate_witnesses,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::psi_brute;

    fn field(q: u32) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::of_order(q).unwrap())
    }

    fn el(f: &FieldSpec, i: u32) -> FieldElement {
        f.element(i).unwrap()
    }

    #[test]
    fn affine_transform_examples() {
        let f5 = field(5);
        let cube = Permutation::new(f5.clone(), &[0, 1, 3, 2, 4]).unwrap();
        let (zero, one) = (FieldElement::ZERO, FieldElement::ONE);
        assert_eq!(affine_transform(&cube, one, one, zero, zero, false).unwrap(), cube);
        let doubled = affine_transform(&cube, el(&f5, 2), one, zero, zero, false).unwrap();
        assert_eq!(doubled.image_indices(), vec![0, 2, 1, 4, 3]);
        assert_eq!(psi_brute(&doubled), 2);
        let id = Permutation::identity(f5.clone());
        assert_eq!(affine_transform(&id, one, one, zero, zero, true).unwrap(), id);
        assert_eq!(
            affine_transform(&id, zero, one, zero, zero, false),
            Err(SearchError::ZeroScale)
        );
    }

    #[test]
    fn normalization_fixes_zero_and_one() {
        let f7 = field(7);
        let alpha = Permutation::new(f7, &[3, 6, 0, 1, 5, 2, 4]).unwrap();
        let n = normalize(&alpha);
        assert_eq!(&n.image_indices()[..2], &[0, 1]);
        assert_eq!(psi_fast(&n), psi_fast(&alpha));
    }

    #[test]
    fn small_psi_minima() {
        let r = min_psi_exhaustive(&field(3), true).unwrap();
        assert_eq!((r.minimum, r.bound, r.attained_bound), (1, 1, true));
        assert_eq!(r.witnesses, vec![vec![0, 1, 2]]);
        let r = min_psi_exhaustive(&field(5), true).unwrap();
        assert_eq!((r.minimum, r.bound, r.attained_bound), (2, 2, true));
        let cube = Permutation::new(field(5), &[0, 1, 3, 2, 4]).unwrap();
        assert!(r.witnesses.contains(&normalize(&cube).image_indices()));
    }

    #[test]
    fn prefixes_cover_normalized_space() {
        let p = injective_prefixes(5, &[0, 1], 2);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2, 3]);
    }

    #[test]
    fn order_checks() {
        assert_eq!(search_field(4).unwrap_err(), SearchError::EvenOrder(4));
        assert_eq!(
            min_psi_exhaustive(&field(13), false).unwrap_err(),
            SearchError::OrderTooLarge { q: 13, ceiling: 11 }
        );
        assert_eq!(
            min_kakeya_exhaustive(&field(9)).unwrap_err(),
            SearchError::OrderTooLarge { q: 9, ceiling: 7 }
        );
        assert_eq!(min_psi_random(&field(5), 0, 1).unwrap_err(), SearchError::NoSamples);
    }

    #[test]
    fn kakeya_small_minima() {
        assert_eq!(min_kakeya_exhaustive(&field(3)).unwrap().minimum, 7);
        assert_eq!(min_kakeya_exhaustive(&field(5)).unwrap().minimum, 17);
    }

    #[test]
    fn incumbent_admission() {
        let mut inc = Incumbent::new(Some(5), false);
        assert!(!inc.admits(5));
        inc.offer(4, || vec![1]);
        inc.offer(4, || vec![2]);
        assert_eq!((inc.found, inc.witnesses, inc.total), (Some(4), vec![vec![1]], 1));
        let mut inc = Incumbent::new(Some(5), true);
        assert!(inc.admits(5));
        inc.offer(5, || vec![1]);
        inc.offer(5, || vec![2]);
        assert_eq!(inc.witnesses, vec![vec![1], vec![2]]);
    }
}
