use std::fmt;
use std::str::FromStr;

/// Valuation classes an agent's set function may be declared to belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    Additive,
    Submodular,
    Supermodular,
    Subadditive,
    Superadditive,
    DoublyMonotone,
    Nonnegative,
    Nonpositive,
    General,
}

impl Class {
    pub const ALL: [Class; 9] = [
        Class::Additive,
        Class::Submodular,
        Class::Supermodular,
        Class::Subadditive,
        Class::Superadditive,
        Class::DoublyMonotone,
        Class::Nonnegative,
        Class::Nonpositive,
        Class::General,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Class::Additive => "additive",
            Class::Submodular => "submodular",
            Class::Supermodular => "supermodular",
            Class::Subadditive => "subadditive",
            Class::Superadditive => "superadditive",
            Class::DoublyMonotone => "doubly_monotone",
            Class::Nonnegative => "nonnegative",
            Class::Nonpositive => "nonpositive",
            Class::General => "general",
        }
    }

    /// The class of `−v` when `v` is in `self`.
    pub fn mirror(&self) -> Class {
        match self {
            Class::Submodular => Class::Supermodular,
            Class::Supermodular => Class::Submodular,
            Class::Subadditive => Class::Superadditive,
            Class::Superadditive => Class::Subadditive,
            Class::Nonnegative => Class::Nonpositive,
            Class::Nonpositive => Class::Nonnegative,
            other => *other,
        }
    }

    fn bit(&self) -> u16 {
        1 << (*self as u16)
    }

    /// Classes directly implied by membership in `self`, for set functions with `v(∅) = 0`.
    fn implied(&self) -> &'static [Class] {
        match self {
            Class::Additive => &[Class::Submodular, Class::Supermodular, Class::DoublyMonotone],
            Class::Submodular => &[Class::Subadditive],
            Class::Supermodular => &[Class::Superadditive],
            _ => &[],
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Class {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let normalized = s.trim().replace('-', "_");
        Class::ALL
            .iter()
            .find(|c| c.name() == normalized)
            .copied()
            .ok_or_else(|| format!("unknown valuation class `{s}`"))
    }
}

/// A set of declared classes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ClassSet(u16);

impl ClassSet {
    pub const EMPTY: ClassSet = ClassSet(0);

    pub fn of(classes: &[Class]) -> Self {
        ClassSet(classes.iter().fold(0, |acc, c| acc | c.bit()))
    }

    pub fn contains(&self, class: Class) -> bool {
        self.0 & class.bit() != 0
    }

    pub fn insert(&mut self, class: Class) {
        self.0 |= class.bit();
    }

    pub fn iter(&self) -> impl Iterator<Item = Class> + '_ {
        Class::ALL.into_iter().filter(|c| self.contains(*c))
    }

    /// Closure under the class lattice (additive ⊂ submodular ⊂ subadditive, ...).
    pub fn closure(&self) -> ClassSet {
        let mut out = *self;
        loop {
            let before = out;
            for c in before.iter() {
                for implied in c.implied() {
                    out.insert(*implied);
                }
            }
            if out == before {
                return out;
            }
        }
    }

    pub fn implies(&self, class: Class) -> bool {
        self.closure().contains(class)
    }

    pub fn mirrored(&self) -> ClassSet {
        ClassSet::of(&self.iter().map(|c| c.mirror()).collect::<Vec<_>>())
    }
}

impl fmt::Display for ClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.iter().map(|c| c.name()).collect();
        write!(f, "[{}]", names.join(", "))
    }
}

impl fmt::Debug for ClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirror_is_involution() {
        for c in Class::ALL {
            assert_eq!(c.mirror().mirror(), c);
        }
        assert_eq!(Class::DoublyMonotone.mirror(), Class::DoublyMonotone);
    }

    #[test]
    fn closure_follows_lattice() {
        let additive = ClassSet::of(&[Class::Additive]);
        for c in [Class::Submodular, Class::Supermodular, Class::Subadditive, Class::Superadditive, Class::DoublyMonotone] {
            assert!(additive.implies(c), "{c}");
        }
        assert!(!additive.implies(Class::Nonnegative));
        assert!(ClassSet::of(&[Class::Submodular]).implies(Class::Subadditive));
        assert!(!ClassSet::of(&[Class::Submodular]).implies(Class::Superadditive));
    }

    #[test]
    fn parse_names() {
        assert_eq!("doubly-monotone".parse::<Class>().unwrap(), Class::DoublyMonotone);
        assert!("xos".parse::<Class>().is_err());
    }
}
