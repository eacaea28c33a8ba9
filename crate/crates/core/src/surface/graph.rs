//! Combinatorial pants decompositions and their Fenchel–Nielsen data.

use crate::error::{LabError, Result};

/// Cuff `cuff` (0, 1 or 2) of pants `pants`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub pants: usize,
    pub cuff: usize,
}

impl Slot {
    pub fn new(pants: usize, cuff: usize) -> Self {
        Slot { pants, cuff }
    }
}

/// Pants count, interior gluings and the ordered boundary slots.
#[derive(Debug, Clone, PartialEq)]
pub struct PantsGraph {
    pub pants: usize,
    pub gluings: Vec<(Slot, Slot)>,
    pub boundary_slots: Vec<Slot>,
}

/// Length and twist per interior gluing (same order as the graph), and a
/// length per boundary slot.
#[derive(Debug, Clone, PartialEq)]
pub struct FnCoordinates {
    pub cuff_lengths: Vec<f64>,
    pub twists: Vec<f64>,
    pub boundary_lengths: Vec<f64>,
}

/// Where a slot ends up: glued (gluing index) or on the boundary
/// (component index).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotRole {
    Glued(usize),
    Boundary(usize),
}

impl PantsGraph {
    /// Genus and boundary count, after checking that every slot is used
    /// exactly once and that the gluing graph is connected.
    pub fn validate(&self) -> Result<(usize, usize)> {
        if self.pants == 0 {
            return Err(LabError::Graph("no pants".into()));
        }
        self.roles()?;
        let mut parent: Vec<usize> = (0..self.pants).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for (a, b) in &self.gluings {
            let (ra, rb) = (find(&mut parent, a.pants), find(&mut parent, b.pants));
            parent[ra.max(rb)] = ra.min(rb);
        }
        let root = find(&mut parent, 0);
        if (0..self.pants).any(|p| find(&mut parent, p) != root) {
            return Err(LabError::Graph("gluing graph is disconnected".into()));
        }
        let n = self.boundary_slots.len();
        // 2 - 2g - n = -P
        let twice_g = self.pants as i64 + 2 - n as i64;
        if twice_g < 0 || twice_g % 2 != 0 {
            return Err(LabError::Graph(format!(
                "{} pants with {n} boundary slots give non-integer genus",
                self.pants
            )));
        }
        Ok(((twice_g / 2) as usize, n))
    }

    /// Role of every slot, indexed `[pants][cuff]`.
    pub fn roles(&self) -> Result<Vec<[SlotRole; 3]>> {
        let mut roles: Vec<[Option<SlotRole>; 3]> = vec![[None; 3]; self.pants];
        let mut claim = |s: Slot, role: SlotRole| -> Result<()> {
            if s.pants >= self.pants || s.cuff >= 3 {
                return Err(LabError::Graph(format!(
                    "slot ({}, {}) does not exist",
                    s.pants, s.cuff
                )));
            }
            let cell = &mut roles[s.pants][s.cuff];
            if cell.is_some() {
                return Err(LabError::Graph(format!(
                    "slot ({}, {}) used twice",
                    s.pants, s.cuff
                )));
            }
            *cell = Some(role);
            Ok(())
        };
        for (i, (a, b)) in self.gluings.iter().enumerate() {
            claim(*a, SlotRole::Glued(i))?;
            claim(*b, SlotRole::Glued(i))?;
        }
        for (i, s) in self.boundary_slots.iter().enumerate() {
            claim(*s, SlotRole::Boundary(i))?;
        }
        roles
            .into_iter()
            .enumerate()
            .map(|(p, r)| {
                let mut out = [SlotRole::Boundary(0); 3];
                for c in 0..3 {
                    out[c] = r[c].ok_or_else(|| {
                        LabError::Graph(format!("slot ({p}, {c}) is neither glued nor boundary"))
                    })?;
                }
                Ok(out)
            })
            .collect()
    }

    /// Cuff lengths of every pants, indexed `[pants][cuff]`.
    pub fn cuff_lengths(&self, fn_coords: &FnCoordinates) -> Result<Vec<[f64; 3]>> {
        self.check_coordinates(fn_coords)?;
        let roles = self.roles()?;
        Ok(roles
            .iter()
            .map(|r| {
                r.map(|role| match role {
                    SlotRole::Glued(i) => fn_coords.cuff_lengths[i],
                    SlotRole::Boundary(i) => fn_coords.boundary_lengths[i],
                })
            })
            .collect())
    }

    pub fn check_coordinates(&self, c: &FnCoordinates) -> Result<()> {
        if c.cuff_lengths.len() != self.gluings.len() || c.twists.len() != self.gluings.len() {
            return Err(LabError::Graph(format!(
                "{} gluings but {} lengths and {} twists",
                self.gluings.len(),
                c.cuff_lengths.len(),
                c.twists.len()
            )));
        }
        if c.boundary_lengths.len() != self.boundary_slots.len() {
            return Err(LabError::Graph(format!(
                "{} boundary slots but {} boundary lengths",
                self.boundary_slots.len(),
                c.boundary_lengths.len()
            )));
        }
        for &l in c.cuff_lengths.iter().chain(&c.boundary_lengths) {
            if !l.is_finite() || l <= 0.0 {
                return Err(LabError::Domain(format!("length {l} must be positive")));
            }
        }
        if c.twists.iter().any(|t| !t.is_finite()) {
            return Err(LabError::Domain("twists must be finite".into()));
        }
        Ok(())
    }

    /// A single pair of pants with three boundary slots.
    pub fn single_pants() -> Self {
        PantsGraph {
            pants: 1,
            gluings: vec![],
            boundary_slots: (0..3).map(|c| Slot::new(0, c)).collect(),
        }
    }

    /// One pants with cuffs 0 and 1 glued: a one-holed torus.
    pub fn one_holed_torus() -> Self {
        PantsGraph {
            pants: 1,
            gluings: vec![(Slot::new(0, 0), Slot::new(0, 1))],
            boundary_slots: vec![Slot::new(0, 2)],
        }
    }
}
