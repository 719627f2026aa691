//! Recorded runs: every insertion with its time, gap and site, replayable
//! from the initiator.

use std::fmt::Write as _;

use super::engine::{Caps, Engine, Fenwick, Options, Termination, RNG_NAME};
use crate::counter::CounterSpec;
use crate::model::{InsertionSystem, ModelError, MonomerId, Polymer, Site};

#[derive(Clone, Debug, PartialEq)]
pub struct TraceEvent {
    pub time: f64,
    pub gap: usize,
    pub monomer: MonomerId,
    pub site: Site,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub seed: u64,
    pub rng: String,
    pub events: Vec<TraceEvent>,
    pub final_polymer: Polymer,
    pub terminated: Termination,
    pub elapsed: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TraceError {
    #[error("event {index}: {source}")]
    Replay { index: usize, source: ModelError },
    #[error("event {index}: recorded site differs from the polymer's site at gap {gap}")]
    SiteMismatch { index: usize, gap: usize },
    #[error("replayed polymer differs from the recorded final polymer")]
    FinalMismatch,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Runs from the initiator, recording every event.
pub fn run(system: &InsertionSystem, seed: u64, caps: Caps) -> Trace {
    let mut engine = Engine::new(
        system,
        seed,
        Options {
            record_times: true,
            audit: false,
        },
    );
    let terminated = engine.run(caps);
    trace_of(&engine, terminated)
}

pub fn trace_of(engine: &Engine<'_>, terminated: Termination) -> Trace {
    let gaps = engine.event_gaps();
    let times = engine.event_times();
    let events = engine
        .events()
        .iter()
        .enumerate()
        .map(|(i, ev)| TraceEvent {
            time: times.get(i).copied().unwrap_or(f64::NAN),
            gap: gaps[i],
            monomer: ev.monomer,
            site: engine.site(ev.site),
        })
        .collect();
    Trace {
        seed: engine.seed(),
        rng: RNG_NAME.to_string(),
        events,
        final_polymer: engine.polymer(),
        terminated,
        elapsed: engine.time(),
    }
}

impl Trace {
    /// Re-applies every event to the initiator, checking each recorded
    /// site and admissibility, and returns the rebuilt polymer.
    ///
    /// Runs in `O(n log n)`: a backward pass fixes each monomer's final
    /// chain position (later insertions claim their slots first), then a
    /// forward pass finds each monomer's neighbours among those already
    /// placed.
    pub fn replay(&self, system: &InsertionSystem) -> Result<Polymer, TraceError> {
        let n = self.events.len();
        let init = Polymer::initial(system).initiator();
        let mut free = Fenwick::new(n);
        for i in 0..n {
            free.add(i, 1);
        }
        let mut slot = vec![0usize; n];
        for (index, ev) in self.events.iter().enumerate().rev() {
            if ev.gap > index {
                let source = ModelError::GapOutOfRange {
                    gap: ev.gap,
                    gaps: index + 1,
                };
                return Err(TraceError::Replay { index, source });
            }
            let (s, _) = free.find(ev.gap as u64);
            slot[index] = s;
            free.sub(s, 1);
        }
        let mut placed = Fenwick::new(n);
        let mut chain: Vec<MonomerId> = vec![0; n];
        for (index, ev) in self.events.iter().enumerate() {
            if ev.monomer as usize >= system.size() {
                return Err(TraceError::Replay {
                    index,
                    source: ModelError::UnknownMonomer(ev.monomer),
                });
            }
            let s = slot[index];
            let before = placed.prefix(s);
            let left = if before == 0 {
                init.left
            } else {
                system.monomer(chain[placed.find(before - 1).0]).right_half()
            };
            let right = if before == placed.total {
                init.right
            } else {
                system.monomer(chain[placed.find(before).0]).left_half()
            };
            let site = Site::new(left, right);
            if site != ev.site {
                return Err(TraceError::SiteMismatch { index, gap: ev.gap });
            }
            if !site.admits(system.monomer(ev.monomer)) {
                let source = ModelError::Inadmissible {
                    site: system.render_site(&site),
                    monomer: system.render_monomer(ev.monomer),
                };
                return Err(TraceError::Replay { index, source });
            }
            chain[s] = ev.monomer;
            placed.add(s, 1);
        }
        Ok(Polymer::from_chain(system, chain))
    }

    /// Replays and compares against the recorded final polymer.
    pub fn verify(&self, system: &InsertionSystem) -> Result<(), TraceError> {
        if self.replay(system)? == self.final_polymer {
            Ok(())
        } else {
            Err(TraceError::FinalMismatch)
        }
    }

    /// CSV with a `#` header line naming the generator. With `counter`,
    /// sites encoding a counter value get a `counter_value` column.
    pub fn to_csv(&self, system: &InsertionSystem, counter: Option<&CounterSpec>) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "# rng={} seed={} steps={} elapsed={} terminated={}",
            self.rng,
            self.seed,
            self.events.len(),
            self.elapsed,
            self.terminated.name()
        )
        .unwrap();
        out.push_str("step,time,gap,monomer,site");
        if counter.is_some() {
            out.push_str(",counter_value");
        }
        out.push('\n');
        for (i, ev) in self.events.iter().enumerate() {
            write!(
                out,
                "{i},{},{},{},\"{}\"",
                ev.time,
                ev.gap,
                ev.monomer,
                system.render_site(&ev.site)
            )
            .unwrap();
            if let Some(spec) = counter {
                out.push(',');
                if let Some(v) = spec.decode_site(&ev.site) {
                    write!(out, "{v}").unwrap();
                }
            }
            out.push('\n');
        }
        out
    }

    /// Reads back what [`Trace::to_csv`] wrote. Sites are re-derived by
    /// replay and checked against the recorded text.
    pub fn from_csv(text: &str, system: &InsertionSystem) -> Result<Trace, TraceError> {
        let parse_err = |line: usize, message: String| TraceError::Parse { line, message };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty trace".into()))?;
        let mut seed = None;
        let mut rng = None;
        let mut elapsed = None;
        let mut terminated = None;
        for field in header.trim_start_matches('#').split_whitespace() {
            let Some((k, v)) = field.split_once('=') else { continue };
            match k {
                "seed" => seed = v.parse().ok(),
                "rng" => rng = Some(v.to_string()),
                "elapsed" => elapsed = v.parse().ok(),
                "terminated" => {
                    terminated = [Termination::Terminal, Termination::StepCap, Termination::TimeCap]
                        .into_iter()
                        .find(|t| t.name() == v)
                }
                _ => {}
            }
        }
        let missing = |what: &str| parse_err(1, format!("header lacks {what}"));
        let seed = seed.ok_or_else(|| missing("seed"))?;
        let rng = rng.ok_or_else(|| missing("rng"))?;
        let elapsed = elapsed.ok_or_else(|| missing("elapsed"))?;
        let terminated = terminated.ok_or_else(|| missing("terminated"))?;
        lines.next();

        let mut p = Polymer::initial(system);
        let mut events = Vec::new();
        for (i, line) in lines {
            let lineno = i + 1;
            let (head, rest) = line
                .split_once(",\"")
                .ok_or_else(|| parse_err(lineno, "missing quoted site".into()))?;
            let (site_text, _) = rest
                .split_once('"')
                .ok_or_else(|| parse_err(lineno, "unterminated site".into()))?;
            let cols: Vec<&str> = head.split(',').collect();
            if cols.len() != 4 {
                return Err(parse_err(lineno, format!("expected 4 leading columns, got {}", cols.len())));
            }
            let num = |s: &str, what: &str| -> Result<u64, TraceError> {
                s.parse().map_err(|_| parse_err(lineno, format!("bad {what} {s:?}")))
            };
            let time: f64 = cols[1]
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad time {:?}", cols[1])))?;
            let gap = num(cols[2], "gap")? as usize;
            let monomer = num(cols[3], "monomer")? as MonomerId;
            let index = events.len();
            let site = p
                .site_at(system, gap)
                .map_err(|source| TraceError::Replay { index, source })?;
            if system.render_site(&site) != site_text {
                return Err(TraceError::SiteMismatch { index, gap });
            }
            p = p
                .insert(system, gap, monomer)
                .map_err(|source| TraceError::Replay { index, source })?;
            events.push(TraceEvent {
                time,
                gap,
                monomer,
                site,
            });
        }
        Ok(Trace {
            seed,
            rng,
            events,
            final_polymer: p,
            terminated,
            elapsed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counter::Counter;

    #[test]
    fn same_seed_same_trace() {
        let c = Counter::generate(1).unwrap();
        let a = run(&c.system, 9, Caps::none());
        let b = run(&c.system, 9, Caps::none());
        assert_eq!(a, b);
        let other = run(&c.system, 10, Caps::none());
        assert_ne!(a.events, other.events);
        assert_eq!(a.final_polymer, other.final_polymer);
    }

    #[test]
    fn replay_and_csv_round_trip() {
        let c = Counter::generate(1).unwrap();
        let t = run(&c.system, 4, Caps::none());
        t.verify(&c.system).unwrap();
        let csv = t.to_csv(&c.system, Some(&c.spec));
        assert!(csv.lines().nth(1).unwrap().ends_with(",counter_value"));
        assert!(csv.lines().nth(2).unwrap().ends_with("\"(s0, s0)(s0, s0*)\",0.0.0"));
        let back = Trace::from_csv(&csv, &c.system).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn tampered_trace_fails_replay() {
        let c = Counter::generate(1).unwrap();
        let mut t = run(&c.system, 4, Caps::steps(10));
        assert_eq!(t.terminated, Termination::StepCap);
        t.events[3].monomer = (t.events[3].monomer + 1) % 39;
        assert!(t.verify(&c.system).is_err());
    }

    #[test]
    fn fast_replay_matches_step_by_step_insertion() {
        use crate::grammars::{compile, Grammar};
        let g = Grammar::from_named("S", &[("S", vec!["a", "S", "b"]), ("S", vec!["a", "b"])]).unwrap();
        let c = compile(&g).unwrap();
        for seed in 0..20 {
            let t = run(&c.system, seed, Caps::steps(60));
            let mut p = Polymer::initial(&c.system);
            for ev in &t.events {
                assert_eq!(p.site_at(&c.system, ev.gap).unwrap(), ev.site);
                p = p.insert(&c.system, ev.gap, ev.monomer).unwrap();
            }
            assert_eq!(t.replay(&c.system).unwrap(), p);
            assert_eq!(p, t.final_polymer);
        }
    }

    #[test]
    fn gap_beyond_the_polymer_is_rejected() {
        let c = Counter::generate(1).unwrap();
        let mut t = run(&c.system, 4, Caps::steps(10));
        t.events[2].gap = 3;
        assert!(matches!(
            t.replay(&c.system),
            Err(TraceError::Replay {
                index: 2,
                source: ModelError::GapOutOfRange { .. }
            })
        ));
    }
}
