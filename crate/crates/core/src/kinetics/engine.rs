//! Incremental direct-method simulation.
//!
//! Every live site is filed under each monomer type it admits. Selection
//! weights are integers (concentrations over a common denominator when one
//! fits, fixed point otherwise), so a single uniform draw picks a monomer
//! type through a Fenwick tree and a site within that type's bucket.
//! Sites are never rescanned: an insertion retires one site and files two.
//!
//! Sites are numbered as they appear: the gaps of the starting polymer
//! first, then two per insertion (event `k` creates `g + 2k` on its left
//! and `g + 2k + 1` on its right, where `g` is the starting gap count).
//! The polymer itself is never materialized during a run; the chain is
//! recovered afterwards by an in-order walk of that tree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::model::{InsertionSystem, MonomerId, Polymer, Site};

pub const RNG_NAME: &str = "ChaCha8Rng/seed_from_u64";

const NONE: u32 = u32::MAX;
const FIXED_POINT_BITS: u32 = 40;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Caps {
    pub max_steps: Option<u64>,
    pub max_time: Option<f64>,
}

impl Caps {
    pub fn none() -> Self {
        Caps::default()
    }

    pub fn steps(n: u64) -> Self {
        Caps {
            max_steps: Some(n),
            max_time: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Termination {
    Terminal,
    StepCap,
    TimeCap,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::Terminal => "terminal",
            Termination::StepCap => "step-cap",
            Termination::TimeCap => "time-cap",
        }
    }
}

/// Integer selection weights. `exact` when every concentration is an
/// integer multiple of `1 / denom`.
#[derive(Clone, Debug)]
pub struct Weights {
    pub per_monomer: Vec<u64>,
    pub denom: f64,
    pub exact: bool,
}

impl Weights {
    pub fn for_system(system: &InsertionSystem) -> Weights {
        let mut lcm: u128 = 1;
        let limit: u128 = 1 << FIXED_POINT_BITS;
        for m in system.monomers() {
            let d = m.concentration.denom() as u128;
            lcm = lcm / gcd(lcm, d) * d;
            if lcm > limit {
                break;
            }
        }
        if lcm <= limit {
            let per_monomer = system
                .monomers()
                .iter()
                .map(|m| {
                    let c = &m.concentration;
                    (c.numer() as u128 * (lcm / c.denom() as u128)) as u64
                })
                .collect();
            Weights {
                per_monomer,
                denom: lcm as f64,
                exact: true,
            }
        } else {
            let scale = (1u64 << FIXED_POINT_BITS) as f64;
            let per_monomer = system
                .monomers()
                .iter()
                .map(|m| ((m.concentration.as_f64() * scale).round() as u64).max(1))
                .collect();
            Weights {
                per_monomer,
                denom: scale,
                exact: false,
            }
        }
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prefix sums over monomer types.
#[derive(Clone, Debug)]
pub(crate) struct Fenwick {
    tree: Vec<u64>,
    pub(crate) total: u64,
}

impl Fenwick {
    pub(crate) fn new(n: usize) -> Self {
        Fenwick {
            tree: vec![0; n + 1],
            total: 0,
        }
    }

    pub(crate) fn add(&mut self, i: usize, delta: u64) {
        self.total += delta;
        let mut i = i + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    pub(crate) fn sub(&mut self, i: usize, delta: u64) {
        self.total -= delta;
        let mut i = i + 1;
        while i < self.tree.len() {
            self.tree[i] -= delta;
            i += i & i.wrapping_neg();
        }
    }

    /// The index whose cumulative range contains `target`, and the offset
    /// of `target` within it.
    pub(crate) fn find(&self, mut target: u64) -> (usize, u64) {
        let mut pos = 0;
        let mut step = (self.tree.len() - 1).next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        (pos, target)
    }

    /// Sum over indices below `i`.
    pub(crate) fn prefix(&self, mut i: usize) -> u64 {
        let mut sum = 0;
        while i > 0 {
            sum += self.tree[i];
            i &= i - 1;
        }
        sum
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Event {
    pub site: u32,
    pub monomer: MonomerId,
}

/// A site admitting more than one monomer type, seen during an audited run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiCandidate {
    pub site: Site,
    pub candidates: Vec<MonomerId>,
    pub step: u64,
}

#[derive(Clone, Debug, Default)]
pub struct Audit {
    /// Usable sites created, initial sites included.
    pub usable_sites: u64,
    pub first_multi: Option<MultiCandidate>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    /// Keep the time of every event (needed for traces).
    pub record_times: bool,
    /// Check every new usable site for a second candidate.
    pub audit: bool,
}

pub struct Engine<'a> {
    system: &'a InsertionSystem,
    weights: Weights,
    fenwick: Fenwick,
    buckets: Vec<Vec<u32>>,
    sites: Vec<Site>,
    slot_start: Vec<u32>,
    slots: Vec<u32>,
    filled: Vec<u32>,
    base: Vec<MonomerId>,
    events: Vec<Event>,
    times: Vec<f64>,
    time: f64,
    rng: ChaCha8Rng,
    seed: u64,
    options: Options,
    audit: Audit,
}

impl<'a> Engine<'a> {
    pub fn new(system: &'a InsertionSystem, seed: u64, options: Options) -> Self {
        Self::from_polymer(system, &Polymer::initial(system), seed, options)
    }

    /// Starts from an arbitrary polymer of `system`.
    pub fn from_polymer(system: &'a InsertionSystem, start: &Polymer, seed: u64, options: Options) -> Self {
        let weights = Weights::for_system(system);
        let mut e = Engine {
            system,
            fenwick: Fenwick::new(system.size()),
            weights,
            buckets: vec![Vec::new(); system.size()],
            sites: Vec::new(),
            slot_start: Vec::new(),
            slots: Vec::new(),
            filled: Vec::new(),
            base: start.chain().to_vec(),
            events: Vec::new(),
            times: Vec::new(),
            time: 0.0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            options,
            audit: Audit::default(),
        };
        for s in start.sites(system) {
            e.file_site(s.site);
        }
        e
    }

    fn file_site(&mut self, site: Site) {
        let id = self.sites.len() as u32;
        self.sites.push(site);
        self.filled.push(NONE);
        self.slot_start.push(self.slots.len() as u32);
        let cands = self.system.candidates(&site);
        if !cands.is_empty() && self.options.audit {
            self.audit.usable_sites += 1;
            if cands.len() > 1 && self.audit.first_multi.is_none() {
                self.audit.first_multi = Some(MultiCandidate {
                    site,
                    candidates: cands.to_vec(),
                    step: self.events.len() as u64,
                });
            }
        }
        for &m in cands {
            let bucket = &mut self.buckets[m as usize];
            self.slots.push(bucket.len() as u32);
            bucket.push(id);
            self.fenwick.add(m as usize, self.weights.per_monomer[m as usize]);
        }
    }

    fn retire_site(&mut self, id: u32) {
        let site = self.sites[id as usize];
        let start = self.slot_start[id as usize] as usize;
        for (j, &m) in self.system.candidates(&site).iter().enumerate() {
            let pos = self.slots[start + j] as usize;
            let bucket = &mut self.buckets[m as usize];
            bucket.swap_remove(pos);
            if pos < bucket.len() {
                let moved = bucket[pos];
                let moved_site = self.sites[moved as usize];
                let k = self
                    .system
                    .candidates(&moved_site)
                    .iter()
                    .position(|&c| c == m)
                    .expect("moved site is filed under m");
                self.slots[self.slot_start[moved as usize] as usize + k] = pos as u32;
            }
            self.fenwick.sub(m as usize, self.weights.per_monomer[m as usize]);
        }
    }

    /// Total propensity: sum of concentrations over admissible pairs.
    pub fn total_rate(&self) -> f64 {
        self.fenwick.total as f64 / self.weights.denom
    }

    pub fn is_terminal(&self) -> bool {
        self.fenwick.total == 0
    }

    /// Fires one event. Fails without inserting when the polymer is
    /// terminal or the next event would land after `max_time`; in the
    /// latter case the clock is advanced to `max_time`.
    pub fn step(&mut self, max_time: Option<f64>) -> Result<(), Termination> {
        let total = self.fenwick.total;
        if total == 0 {
            return Err(Termination::Terminal);
        }
        let wait: f64 = self.rng.sample::<f64, _>(Exp1) / self.total_rate();
        if let Some(limit) = max_time {
            if self.time + wait > limit {
                self.time = limit;
                return Err(Termination::TimeCap);
            }
        }
        self.time += wait;
        let draw = self.rng.random_range(0..total);
        let (m, offset) = self.fenwick.find(draw);
        let idx = (offset / self.weights.per_monomer[m]) as usize;
        let site_id = self.buckets[m][idx];
        self.apply(site_id, m as MonomerId);
        Ok(())
    }

    fn apply(&mut self, site_id: u32, m: MonomerId) {
        let site = self.sites[site_id as usize];
        self.retire_site(site_id);
        self.filled[site_id as usize] = self.events.len() as u32;
        self.events.push(Event { site: site_id, monomer: m });
        if self.options.record_times {
            self.times.push(self.time);
        }
        let (left, right) = site.split(self.system.monomer(m));
        self.file_site(left);
        self.file_site(right);
    }

    pub fn run(&mut self, caps: Caps) -> Termination {
        loop {
            if let Some(n) = caps.max_steps {
                if self.events.len() as u64 >= n {
                    return if self.is_terminal() {
                        Termination::Terminal
                    } else {
                        Termination::StepCap
                    };
                }
            }
            if let Err(t) = self.step(caps.max_time) {
                return t;
            }
        }
    }

    pub fn system(&self) -> &InsertionSystem {
        self.system
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Time of the last insertion (zero if none).
    pub fn last_event_time(&self) -> Option<f64> {
        self.times.last().copied()
    }

    pub fn steps(&self) -> u64 {
        self.events.len() as u64
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event_times(&self) -> &[f64] {
        &self.times
    }

    pub fn audit(&self) -> &Audit {
        &self.audit
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn site(&self, id: u32) -> Site {
        self.sites[id as usize]
    }

    pub fn site_count(&self) -> usize {
        self.sites.len()
    }

    fn initial_gaps(&self) -> u32 {
        self.base.len() as u32 + 1
    }

    fn children(&self, event: u32) -> (u32, u32) {
        let g = self.initial_gaps();
        (g + 2 * event, g + 2 * event + 1)
    }

    /// In-order walk; `visit` sees each unit as either an original chain
    /// monomer (`None`) or an event index, and each unfilled site.
    fn walk(&self, mut unit: impl FnMut(Option<u32>, MonomerId), mut open: impl FnMut(u32)) {
        enum Work {
            Site(u32),
            Event(u32),
            Base(usize),
        }
        let mut stack = Vec::new();
        for gap in (0..self.initial_gaps()).rev() {
            if (gap as usize) < self.base.len() {
                stack.push(Work::Base(gap as usize));
            }
            stack.push(Work::Site(gap));
        }
        while let Some(w) = stack.pop() {
            match w {
                Work::Base(i) => unit(None, self.base[i]),
                Work::Event(k) => unit(Some(k), self.events[k as usize].monomer),
                Work::Site(s) => {
                    let k = self.filled[s as usize];
                    if k == NONE {
                        open(s);
                    } else {
                        let (l, r) = self.children(k);
                        stack.push(Work::Site(r));
                        stack.push(Work::Event(k));
                        stack.push(Work::Site(l));
                    }
                }
            }
        }
    }

    pub fn chain(&self) -> Vec<MonomerId> {
        let mut out = Vec::with_capacity(self.base.len() + self.events.len());
        self.walk(|_, m| out.push(m), |_| {});
        out
    }

    pub fn polymer(&self) -> Polymer {
        Polymer::from_chain(self.system, self.chain())
    }

    /// Gap index of every event at the moment it fired.
    pub fn event_gaps(&self) -> Vec<usize> {
        let n = self.base.len() + self.events.len();
        let mut position = vec![0usize; self.events.len()];
        let mut base_positions = Vec::with_capacity(self.base.len());
        let mut i = 0;
        self.walk(
            |k, _| {
                match k {
                    Some(k) => position[k as usize] = i,
                    None => base_positions.push(i),
                }
                i += 1;
            },
            |_| {},
        );
        // Fenwick over final positions: earlier units to the left
        let mut tree = vec![0u32; n + 1];
        let add = |tree: &mut Vec<u32>, p: usize| {
            let mut j = p + 1;
            while j <= n {
                tree[j] += 1;
                j += j & j.wrapping_neg();
            }
        };
        let prefix = |tree: &Vec<u32>, p: usize| {
            let mut j = p;
            let mut s = 0;
            while j > 0 {
                s += tree[j];
                j -= j & j.wrapping_neg();
            }
            s as usize
        };
        for &p in &base_positions {
            add(&mut tree, p);
        }
        let mut gaps = Vec::with_capacity(self.events.len());
        for &p in &position {
            gaps.push(prefix(&tree, p));
            add(&mut tree, p);
        }
        gaps
    }

    /// Admissible `(gap, monomer)` pairs of the current polymer, from the
    /// engine's own bookkeeping, in gap then monomer order.
    pub fn admissible_pairs(&self) -> Vec<(usize, MonomerId)> {
        let mut gap_of = rustc_hash::FxHashMap::default();
        let units = std::cell::Cell::new(0usize);
        self.walk(
            |_, _| units.set(units.get() + 1),
            |s| {
                gap_of.insert(s, units.get());
            },
        );
        let mut out = Vec::new();
        for (m, bucket) in self.buckets.iter().enumerate() {
            for s in bucket {
                out.push((gap_of[s], m as MonomerId));
            }
        }
        out.sort_unstable();
        out
    }

    /// Monomers eventually inserted inside each site, by site id.
    pub fn fill_sizes(&self) -> Vec<u64> {
        let mut size = vec![0u64; self.sites.len()];
        for k in (0..self.events.len() as u32).rev() {
            let (l, r) = self.children(k);
            size[self.events[k as usize].site as usize] = 1 + size[l as usize] + size[r as usize];
        }
        size
    }
}
