//! Mutation operators for test-case payloads.
//!
//! Each call applies exactly one operator. Operators that need structure
//! the payload lacks (a numeric token, a second corpus entry, a byte to
//! delete) fall back to plain substitution, so a mutant always differs
//! from its parent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FilterConfig;
use crate::model::TestCase;

/// The operator that produced a mutant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MutationOp {
    /// Replace one byte with a whitelisted byte.
    Substitute,
    /// Insert one byte (full 0–255 range — the validity filter earns
    /// its keep on these).
    Insert,
    /// Remove one byte.
    Delete,
    /// Duplicate one whitespace-delimited token.
    DuplicateToken,
    /// ±1 / ±10 / negate on a numeric token.
    NumericArith,
    /// Replace a token with a boundary value (0, 1, -1, 2^31-1).
    BoundarySub,
    /// Prefix of the parent + suffix of another corpus entry.
    Splice,
}

const BOUNDARY_VALUES: [&[u8]; 4] = [b"0", b"1", b"-1", b"2147483647"];

/// Byte ranges of whitespace-separated tokens.
fn tokens_of(payload: &[u8]) -> Vec<(usize, usize)> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, &b) in payload.iter().enumerate() {
        if b.is_ascii_whitespace() {
            if let Some(s) = start.take() {
                tokens.push((s, i));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push((s, payload.len()));
    }
    tokens
}

fn is_numeric_token(token: &[u8]) -> bool {
    let digits = token.strip_prefix(b"-").unwrap_or(token);
    !digits.is_empty() && digits.iter().all(u8::is_ascii_digit)
}

pub(crate) fn insert_at(payload: &[u8], pos: usize, byte: u8) -> Vec<u8> {
    let mut out = Vec::with_capacity(payload.len() + 1);
    out.extend_from_slice(&payload[..pos]);
    out.push(byte);
    out.extend_from_slice(&payload[pos..]);
    out
}

pub(crate) fn substitute_at(payload: &[u8], pos: usize, byte: u8) -> Vec<u8> {
    let mut out = payload.to_vec();
    out[pos] = byte;
    out
}

pub(crate) fn delete_at(payload: &[u8], pos: usize) -> Vec<u8> {
    let mut out = payload.to_vec();
    out.remove(pos);
    out
}

pub(crate) fn duplicate_token(payload: &[u8], token: (usize, usize)) -> Vec<u8> {
    let (start, end) = token;
    let mut out = Vec::with_capacity(payload.len() + (end - start) + 1);
    out.extend_from_slice(&payload[..end]);
    out.push(b' ');
    out.extend_from_slice(&payload[start..end]);
    out.extend_from_slice(&payload[end..]);
    out
}

/// One arithmetic tweak of a numeric token; `None` when the token does
/// not parse or the arithmetic overflows.
pub(crate) fn numeric_arith(payload: &[u8], token: (usize, usize), variant: u8) -> Option<Vec<u8>> {
    let (start, end) = token;
    let text = std::str::from_utf8(&payload[start..end]).ok()?;
    let value: i64 = text.parse().ok()?;
    let tweaked = match variant {
        0 => value.checked_add(1)?,
        1 => value.checked_sub(1)?,
        2 => value.checked_add(10)?,
        3 => value.checked_sub(10)?,
        _ => value.checked_neg()?,
    };
    Some(replace_range(
        payload,
        token,
        tweaked.to_string().as_bytes(),
    ))
}

pub(crate) fn replace_range(payload: &[u8], (start, end): (usize, usize), with: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(payload.len() - (end - start) + with.len());
    out.extend_from_slice(&payload[..start]);
    out.extend_from_slice(with);
    out.extend_from_slice(&payload[end..]);
    out
}

pub(crate) fn splice(parent: &[u8], other: &[u8], cut_parent: usize, cut_other: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(cut_parent + other.len() - cut_other);
    out.extend_from_slice(&parent[..cut_parent]);
    out.extend_from_slice(&other[cut_other..]);
    out
}

/// Seedable source of mutants. Identical seeds replay identical mutant
/// streams, which is what makes campaigns reproducible.
pub struct Mutator {
    rng: ChaCha8Rng,
    allowed: Vec<u8>,
}

impl Mutator {
    pub fn new(rng_seed: u64, filter: &FilterConfig) -> Self {
        Mutator {
            rng: ChaCha8Rng::seed_from_u64(rng_seed),
            allowed: filter.allowed_characters.iter().copied().collect(),
        }
    }

    fn allowed_byte(&mut self) -> u8 {
        self.allowed[self.rng.gen_range(0..self.allowed.len())]
    }

    /// Substitution that always changes the payload (the fallback every
    /// other operator degenerates to).
    fn substitute(&mut self, payload: &[u8]) -> Vec<u8> {
        let pos = self.rng.gen_range(0..payload.len());
        for _ in 0..8 {
            let byte = self.allowed_byte();
            if byte != payload[pos] {
                return substitute_at(payload, pos, byte);
            }
        }
        // Whitelist too small to differ at this position; insert instead.
        let byte = self.allowed_byte();
        insert_at(payload, pos, byte)
    }

    /// Applies one randomly chosen operator to `parent`, consulting
    /// `queue` for splice partners. The returned payload always differs
    /// from the parent; the reported op is the one actually applied
    /// after fallbacks.
    pub fn mutate(
        &mut self,
        parent: &TestCase,
        queue: &[TestCase],
        parent_idx: usize,
    ) -> (Vec<u8>, MutationOp) {
        let payload = &parent.payload;
        if payload.is_empty() {
            let byte = self.rng.gen::<u8>();
            return (insert_at(payload, 0, byte), MutationOp::Insert);
        }

        for _ in 0..8 {
            let (mutant, op) = self.mutate_once(payload, queue, parent_idx);
            if mutant != *payload {
                return (mutant, op);
            }
        }
        (self.substitute(payload), MutationOp::Substitute)
    }

    fn mutate_once(
        &mut self,
        payload: &[u8],
        queue: &[TestCase],
        parent_idx: usize,
    ) -> (Vec<u8>, MutationOp) {
        let tokens = tokens_of(payload);
        match self.rng.gen_range(0..7u8) {
            0 => (self.substitute(payload), MutationOp::Substitute),
            1 => {
                let pos = self.rng.gen_range(0..=payload.len());
                let byte = self.rng.gen::<u8>();
                (insert_at(payload, pos, byte), MutationOp::Insert)
            }
            2 => {
                if payload.len() == 1 {
                    // Deleting the only byte would leave nothing to run.
                    (self.substitute(payload), MutationOp::Substitute)
                } else {
                    let pos = self.rng.gen_range(0..payload.len());
                    (delete_at(payload, pos), MutationOp::Delete)
                }
            }
            3 => match self.pick_token(&tokens, |_| true) {
                Some(token) => (duplicate_token(payload, token), MutationOp::DuplicateToken),
                None => (self.substitute(payload), MutationOp::Substitute),
            },
            4 => {
                let numeric = self.pick_token(&tokens, |t| is_numeric_token(&payload[t.0..t.1]));
                let variant = self.rng.gen_range(0..5u8);
                match numeric.and_then(|t| numeric_arith(payload, t, variant)) {
                    Some(mutant) => (mutant, MutationOp::NumericArith),
                    None => (self.substitute(payload), MutationOp::Substitute),
                }
            }
            5 => match self.pick_token(&tokens, |_| true) {
                Some(token) => {
                    let value = BOUNDARY_VALUES[self.rng.gen_range(0..BOUNDARY_VALUES.len())];
                    (
                        replace_range(payload, token, value),
                        MutationOp::BoundarySub,
                    )
                }
                None => (self.substitute(payload), MutationOp::Substitute),
            },
            _ => {
                if queue.len() < 2 {
                    return (self.substitute(payload), MutationOp::Substitute);
                }
                let mut other_idx = self.rng.gen_range(0..queue.len());
                if other_idx == parent_idx {
                    other_idx = (other_idx + 1) % queue.len();
                }
                let other = &queue[other_idx].payload;
                let cut_parent = self.rng.gen_range(0..=payload.len());
                let cut_other = self.rng.gen_range(0..=other.len());
                let mutant = splice(payload, other, cut_parent, cut_other);
                if mutant.is_empty() {
                    return (self.substitute(payload), MutationOp::Substitute);
                }
                (mutant, MutationOp::Splice)
            }
        }
    }

    fn pick_token(
        &mut self,
        tokens: &[(usize, usize)],
        keep: impl Fn(&(usize, usize)) -> bool,
    ) -> Option<(usize, usize)> {
        let eligible: Vec<(usize, usize)> = tokens.iter().copied().filter(|t| keep(t)).collect();
        if eligible.is_empty() {
            None
        } else {
            Some(eligible[self.rng.gen_range(0..eligible.len())])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CaseOrigin;

    fn case(payload: &[u8]) -> TestCase {
        TestCase {
            case_id: 0,
            payload: payload.to_vec(),
            origin: CaseOrigin::Seed,
            parent_id: None,
            valid: true,
        }
    }

    #[test]
    fn operator_primitives_match_their_definitions() {
        assert_eq!(insert_at(b"abc", 3, b'd'), b"abcd");
        assert_eq!(insert_at(b"abc", 0, b'x'), b"xabc");
        assert_eq!(substitute_at(b"abc", 1, b'z'), b"azc");
        assert_eq!(delete_at(b"abc", 1), b"ac");
        assert_eq!(duplicate_token(b"ab cd", (0, 2)), b"ab ab cd");
        assert_eq!(numeric_arith(b"5", (0, 1), 0).unwrap(), b"6");
        assert_eq!(numeric_arith(b"5", (0, 1), 4).unwrap(), b"-5");
        assert_eq!(numeric_arith(b"7 9", (2, 3), 3).unwrap(), b"7 -1");
        assert_eq!(numeric_arith(b"abc", (0, 3), 0), None);
        assert_eq!(
            replace_range(b"10 20", (3, 5), b"2147483647"),
            b"10 2147483647"
        );
        assert_eq!(splice(b"aaaa", b"bbbb", 2, 1), b"aabbb");
    }

    #[test]
    fn tokens_split_on_ascii_whitespace() {
        assert_eq!(tokens_of(b"ab  cd\n5"), vec![(0, 2), (4, 6), (7, 8)]);
        assert_eq!(tokens_of(b"  "), vec![]);
        assert!(is_numeric_token(b"-42"));
        assert!(!is_numeric_token(b"4x2"));
        assert!(!is_numeric_token(b"-"));
    }

    #[test]
    fn mutants_always_differ_from_the_parent() {
        let mut mutator = Mutator::new(7, &FilterConfig::default());
        let queue = vec![case(b"10 20\n"), case(b"abc def")];
        for idx in 0..queue.len() {
            for _ in 0..500 {
                let (mutant, _) = mutator.mutate(&queue[idx], &queue, idx);
                assert_ne!(mutant, queue[idx].payload);
            }
        }
    }

    #[test]
    fn empty_parent_forces_insertion() {
        let mut mutator = Mutator::new(1, &FilterConfig::default());
        let parent = case(b"");
        let queue = vec![parent.clone()];
        let (mutant, op) = mutator.mutate(&parent, &queue, 0);
        assert_eq!(op, MutationOp::Insert);
        assert_eq!(mutant.len(), 1);
    }

    #[test]
    fn all_operators_show_up_over_many_draws() {
        let mut mutator = Mutator::new(42, &FilterConfig::default());
        let queue = vec![case(b"12 34 hello\n"), case(b"9 9 9 9 9")];
        let mut seen = std::collections::HashSet::new();
        for _ in 0..2000 {
            let (_, op) = mutator.mutate(&queue[0], &queue, 0);
            seen.insert(op);
        }
        for op in [
            MutationOp::Substitute,
            MutationOp::Insert,
            MutationOp::Delete,
            MutationOp::DuplicateToken,
            MutationOp::NumericArith,
            MutationOp::BoundarySub,
            MutationOp::Splice,
        ] {
            assert!(seen.contains(&op), "operator {op:?} never fired");
        }
    }

    #[test]
    fn identical_seeds_replay_identical_streams() {
        let queue = vec![case(b"10 20 30"), case(b"x y z")];
        let run = |seed: u64| {
            let mut mutator = Mutator::new(seed, &FilterConfig::default());
            (0..200)
                .map(|_| mutator.mutate(&queue[0], &queue, 0).0)
                .collect::<Vec<_>>()
        };
        assert_eq!(run(99), run(99));
        assert_ne!(run(99), run(100));
    }
}
