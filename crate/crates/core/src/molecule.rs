use serde::{Deserialize, Serialize};

/// The three green leaf volatiles carried by the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Molecule {
    /// (Z)-3-hexenal, the aldehyde.
    Hal,
    /// (Z)-3-hexenol, the alcohol.
    Hol,
    /// (Z)-3-hexenyl acetate, the ester.
    Hac,
}

impl Molecule {
    pub const ALL: [Molecule; 3] = [Molecule::Hal, Molecule::Hol, Molecule::Hac];

    pub fn tag(&self) -> &'static str {
        match self {
            Molecule::Hal => "HAL",
            Molecule::Hol => "HOL",
            Molecule::Hac => "HAC",
        }
    }
}

/// A value for each of the three molecules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerMolecule<T> {
    pub hal: T,
    pub hol: T,
    pub hac: T,
}

impl<T> PerMolecule<T> {
    pub fn new(hal: T, hol: T, hac: T) -> Self {
        Self { hal, hol, hac }
    }

    pub fn get(&self, m: Molecule) -> &T {
        match m {
            Molecule::Hal => &self.hal,
            Molecule::Hol => &self.hol,
            Molecule::Hac => &self.hac,
        }
    }

    pub fn get_mut(&mut self, m: Molecule) -> &mut T {
        match m {
            Molecule::Hal => &mut self.hal,
            Molecule::Hol => &mut self.hol,
            Molecule::Hac => &mut self.hac,
        }
    }

    pub fn map<U>(&self, mut f: impl FnMut(Molecule, &T) -> U) -> PerMolecule<U> {
        PerMolecule {
            hal: f(Molecule::Hal, &self.hal),
            hol: f(Molecule::Hol, &self.hol),
            hac: f(Molecule::Hac, &self.hac),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Molecule, &T)> {
        Molecule::ALL.iter().map(move |&m| (m, self.get(m)))
    }
}

impl<T: Copy> PerMolecule<T> {
    pub fn splat(v: T) -> Self {
        Self { hal: v, hol: v, hac: v }
    }

    pub fn to_array(&self) -> [T; 3] {
        [self.hal, self.hol, self.hac]
    }
}
