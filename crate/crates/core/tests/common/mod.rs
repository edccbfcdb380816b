#![allow(dead_code)]

use proxtile::substitution::SubstitutionSystem;

pub fn build(name: &str, rules: &[(&str, &str)]) -> SubstitutionSystem {
    let letters: Vec<String> = rules.iter().map(|(l, _)| l.to_string()).collect();
    let words: Vec<Vec<String>> = rules.iter().map(|(_, w)| w.chars().map(|c| c.to_string()).collect()).collect();
    SubstitutionSystem::build(name, &letters, &words).unwrap()
}

pub fn fibonacci() -> SubstitutionSystem {
    build("fibonacci", &[("a", "ab"), ("b", "a")])
}

pub fn thue_morse() -> SubstitutionSystem {
    build("thue-morse", &[("a", "ab"), ("b", "ba")])
}

pub fn period_doubling() -> SubstitutionSystem {
    build("period-doubling", &[("a", "ab"), ("b", "aa")])
}

pub fn shipped() -> Vec<SubstitutionSystem> {
    vec![fibonacci(), thue_morse(), period_doubling()]
}

pub fn tribonacci() -> SubstitutionSystem {
    build("tribonacci", &[("a", "ab"), ("b", "ac"), ("c", "a")])
}
