//! Block-word filters (permutation, injective, surjective, periodic), track
//! products, and a bounded brute-force realizability search.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::dfa::{all_words, tokenize, Dfa, Word};
use crate::error::{Error, Result};

pub const DELIMITER: &str = "#";

/// Blocks of a word `#w_1#...#w_N#`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockWord {
    pub blocks: Vec<Vec<String>>,
    pub rank: usize,
}

impl BlockWord {
    pub fn new(blocks: Vec<Vec<String>>) -> Result<BlockWord> {
        let Some(first) = blocks.first() else {
            return Err(Error::Malformed {
                pos: 0,
                reason: "no blocks".into(),
            });
        };
        let rank = first.len();
        if rank == 0 {
            return Err(Error::Malformed {
                pos: 1,
                reason: "empty block".into(),
            });
        }
        if let Some(i) = blocks.iter().position(|b| b.len() != rank) {
            return Err(Error::Malformed {
                pos: 1 + i * (rank + 1),
                reason: "blocks of unequal length".into(),
            });
        }
        Ok(BlockWord { blocks, rank })
    }

    pub fn count(&self) -> usize {
        self.blocks.len()
    }

    fn symbols(&self) -> impl Iterator<Item = &String> {
        self.blocks.iter().flatten()
    }

    fn distinct(&self) -> usize {
        self.blocks.iter().collect::<HashSet<_>>().len()
    }

    fn over(&self, alphabet: &[String]) -> bool {
        self.symbols().all(|s| alphabet.contains(s))
    }

    /// Number of words of length `rank` over `alphabet`, if it fits.
    fn universe(&self, alphabet: &[String]) -> Option<usize> {
        alphabet.len().checked_pow(u32::try_from(self.rank).ok()?)
    }
}

impl fmt::Display for BlockWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let single = self.symbols().all(|s| s.chars().count() == 1);
        let sep = if single { "" } else { " " };
        write!(f, "#")?;
        for b in &self.blocks {
            write!(f, "{sep}{}{sep}#", b.join(sep))?;
        }
        Ok(())
    }
}

/// Splits on `#`; the word must start and end with `#` and all blocks must
/// be nonempty and of equal length. Positions count symbols from 0.
pub fn parse_block_word(text: &str) -> Result<BlockWord> {
    parse_tokens(&tokenize(text))
}

pub fn parse_tokens(tokens: &[String]) -> Result<BlockWord> {
    if tokens.first().map(String::as_str) != Some(DELIMITER) {
        return Err(Error::Malformed {
            pos: 0,
            reason: "word must start with #".into(),
        });
    }
    if tokens.len() < 2 || tokens.last().map(String::as_str) != Some(DELIMITER) {
        return Err(Error::Malformed {
            pos: tokens.len().saturating_sub(1),
            reason: "word must end with #".into(),
        });
    }
    let mut blocks = Vec::new();
    let mut cur = Vec::new();
    let mut rank = None;
    for (pos, t) in tokens.iter().enumerate().skip(1) {
        if t != DELIMITER {
            cur.push(t.clone());
            continue;
        }
        if cur.is_empty() {
            return Err(Error::Malformed {
                pos,
                reason: "empty block".into(),
            });
        }
        match rank {
            None => rank = Some(cur.len()),
            Some(r) if r != cur.len() => {
                return Err(Error::Malformed {
                    pos,
                    reason: format!("block of length {} after blocks of length {r}", cur.len()),
                });
            }
            _ => {}
        }
        blocks.push(std::mem::take(&mut cur));
    }
    BlockWord::new(blocks)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Filter {
    Permutation,
    Injective,
    Surjective,
    Periodic,
}

impl Filter {
    pub fn parse(s: &str) -> Option<Filter> {
        Some(match s {
            "pb" | "perm" | "permutation" => Filter::Permutation,
            "inj" | "injective" => Filter::Injective,
            "sur" | "surjective" => Filter::Surjective,
            "per" | "periodic" => Filter::Periodic,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Filter::Permutation => "pb",
            Filter::Injective => "inj",
            Filter::Surjective => "sur",
            Filter::Periodic => "per",
        }
    }

    pub fn contains(self, w: &BlockWord, alphabet: &[String]) -> bool {
        if !w.over(alphabet) {
            return false;
        }
        match self {
            Filter::Permutation => {
                w.universe(alphabet) == Some(w.count()) && w.distinct() == w.count()
            }
            Filter::Injective => w.distinct() == w.count(),
            Filter::Surjective => w.universe(alphabet) == Some(w.distinct()),
            Filter::Periodic => w.distinct() == 1,
        }
    }
}

pub fn binary() -> Vec<String> {
    vec!["0".into(), "1".into()]
}

pub fn in_permutation_filter(text: &str) -> Result<bool> {
    Ok(Filter::Permutation.contains(&parse_block_word(text)?, &binary()))
}

pub fn in_injective(text: &str) -> Result<bool> {
    Ok(Filter::Injective.contains(&parse_block_word(text)?, &binary()))
}

pub fn in_surjective(text: &str) -> Result<bool> {
    Ok(Filter::Surjective.contains(&parse_block_word(text)?, &binary()))
}

pub fn in_periodic(text: &str) -> Result<bool> {
    Ok(Filter::Periodic.contains(&parse_block_word(text)?, &binary()))
}

/// Projects a word over `a|b` pairs onto its two tracks. Without whitespace
/// every pair is read as three characters.
pub fn project_tracks(text: &str) -> Result<(BlockWord, BlockWord)> {
    let tokens = if text.chars().any(char::is_whitespace) {
        tokenize(text)
    } else {
        let chars: Vec<char> = text.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let width = if chars[i] == '#' {
                1
            } else {
                3.min(chars.len() - i)
            };
            out.push(chars[i..i + width].iter().collect());
            i += width;
        }
        out
    };
    let mut left = Vec::with_capacity(tokens.len());
    let mut right = Vec::with_capacity(tokens.len());
    for (pos, t) in tokens.iter().enumerate() {
        if t == DELIMITER {
            left.push(t.clone());
            right.push(t.clone());
            continue;
        }
        let Some((a, b)) = t.split_once('|') else {
            return Err(Error::Malformed {
                pos,
                reason: format!("{t:?} is not a track pair"),
            });
        };
        left.push(a.to_string());
        right.push(b.to_string());
    }
    Ok((parse_tokens(&left)?, parse_tokens(&right)?))
}

pub fn track_product_member(
    text: &str,
    first: impl Fn(&BlockWord) -> bool,
    second: impl Fn(&BlockWord) -> bool,
) -> Result<bool> {
    let (a, b) = project_tracks(text)?;
    Ok(first(&a) && second(&b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteOutcome {
    Witness { word: String, rank: usize },
    Exhausted { max_rank: usize },
}

/// Limits for [`brute_realizability`].
#[derive(Clone, Copy, Debug)]
pub struct BruteLimits {
    pub max_rank: usize,
    /// Total search nodes before refusing.
    pub budget: u64,
    /// Extra blocks allowed beyond `|Σ|^n` for the surjective and periodic
    /// filters.
    pub slack: usize,
}

impl BruteLimits {
    pub fn new(max_rank: usize, budget: u64) -> BruteLimits {
        BruteLimits {
            max_rank,
            budget,
            slack: 2,
        }
    }
}

/// Least filter member accepted by `r`, in the order rank, block count,
/// serialization. The block alphabet is the automaton alphabet without `#`.
pub fn brute_realizability(r: &Dfa, filter: Filter, limits: BruteLimits) -> Result<BruteOutcome> {
    let mut spent = 0u64;
    for n in 1..=limits.max_rank {
        if let Some(word) = brute_at_rank_inner(r, filter, n, limits, &mut spent)? {
            return Ok(BruteOutcome::Witness { word, rank: n });
        }
    }
    Ok(BruteOutcome::Exhausted {
        max_rank: limits.max_rank,
    })
}

/// Search restricted to block rank `n`.
pub fn brute_at_rank(
    r: &Dfa,
    filter: Filter,
    n: usize,
    budget: u64,
    slack: usize,
) -> Result<Option<String>> {
    let mut spent = 0;
    brute_at_rank_inner(
        r,
        filter,
        n,
        BruteLimits {
            max_rank: n,
            budget,
            slack,
        },
        &mut spent,
    )
}

fn brute_at_rank_inner(
    r: &Dfa,
    filter: Filter,
    n: usize,
    limits: BruteLimits,
    spent: &mut u64,
) -> Result<Option<String>> {
    let hash = r
        .symbol_index(DELIMITER)
        .ok_or_else(|| Error::Alphabet("automaton alphabet lacks #".into()))?;
    let letters: Vec<usize> = (0..r.alphabet().len()).filter(|&a| a != hash).collect();
    let universe = letters
        .len()
        .checked_pow(n as u32)
        .filter(|&u| u <= 1 << 20)
        .ok_or_else(|| {
            Error::Refused(format!(
                "{}^{n} blocks are too many to enumerate",
                letters.len()
            ))
        })?;
    if universe == 0 {
        return Ok(None);
    }
    let blocks: Vec<Word> = all_words(letters.len(), n)
        .into_iter()
        .map(|w| w.into_iter().map(|i| letters[i]).collect())
        .collect();
    let live = r.live_states();
    let counts: Vec<usize> = match filter {
        Filter::Permutation => vec![universe],
        Filter::Injective => (1..=universe).collect(),
        Filter::Surjective | Filter::Periodic => (1..=universe + limits.slack)
            .filter(|&c| filter != Filter::Surjective || c >= universe)
            .collect(),
    };
    let start = r.step(r.initial(), hash);
    if !live[start] {
        return Ok(None);
    }
    for count in counts {
        let mut search = Search {
            r,
            hash,
            blocks: &blocks,
            live: &live,
            filter,
            count,
            used: vec![0; blocks.len()],
            missing: blocks.len(),
            chosen: Vec::new(),
            spent,
            budget: limits.budget,
        };
        if search.dfs(start)? {
            let mut w = vec![hash];
            for &b in &search.chosen {
                w.extend(&blocks[b]);
                w.push(hash);
            }
            return Ok(Some(r.render_word(&w)));
        }
    }
    Ok(None)
}

struct Search<'a> {
    r: &'a Dfa,
    hash: usize,
    blocks: &'a [Word],
    live: &'a [bool],
    filter: Filter,
    count: usize,
    used: Vec<usize>,
    missing: usize,
    chosen: Vec<usize>,
    spent: &'a mut u64,
    budget: u64,
}

impl Search<'_> {
    fn dfs(&mut self, q: usize) -> Result<bool> {
        *self.spent += 1;
        if *self.spent > self.budget {
            return Err(Error::Refused(format!(
                "search budget of {} nodes exhausted",
                self.budget
            )));
        }
        let depth = self.chosen.len();
        if self.filter == Filter::Surjective && self.count - depth < self.missing {
            return Ok(false);
        }
        if depth == self.count {
            return Ok(self.r.is_accepting(q));
        }
        for b in 0..self.blocks.len() {
            let allowed = match self.filter {
                Filter::Permutation | Filter::Injective => self.used[b] == 0,
                Filter::Surjective => true,
                Filter::Periodic => self.chosen.first().is_none_or(|&f| f == b),
            };
            if !allowed {
                continue;
            }
            let q2 = self.r.step(self.r.run_from(q, &self.blocks[b]), self.hash);
            if !self.live[q2] {
                continue;
            }
            if self.used[b] == 0 {
                self.missing -= 1;
            }
            self.used[b] += 1;
            self.chosen.push(b);
            if self.dfs(q2)? {
                return Ok(true);
            }
            self.chosen.pop();
            self.used[b] -= 1;
            if self.used[b] == 0 {
                self.missing += 1;
            }
        }
        Ok(false)
    }
}

/// Multiset of blocks, for reports.
pub fn block_histogram(w: &BlockWord) -> BTreeMap<String, usize> {
    let mut h = BTreeMap::new();
    for b in &w.blocks {
        *h.entry(b.concat()).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin_dfa(states: usize, accepting: &[usize], step: impl Fn(usize, usize) -> usize) -> Dfa {
        Dfa::from_fn(&["0", "1", "#"], states, 0, accepting, step).unwrap()
    }

    #[test]
    fn parsing() {
        let w = parse_block_word("#0#1#").unwrap();
        assert_eq!((w.count(), w.rank), (2, 1));
        assert_eq!(parse_block_word("#01#").unwrap().rank, 2);
        assert!(matches!(
            parse_block_word("#0#11#"),
            Err(Error::Malformed { pos: 5, .. })
        ));
        assert!(parse_block_word("0#1#").is_err());
        assert!(parse_block_word("#0#1").is_err());
        assert!(parse_block_word("##").is_err());
        assert_eq!(parse_block_word("#01#10#").unwrap().to_string(), "#01#10#");
    }

    #[test]
    fn membership_examples() {
        assert!(in_permutation_filter("#0#1#").unwrap());
        assert!(in_injective("#0#1#").unwrap() && in_surjective("#0#1#").unwrap());
        assert!(in_periodic("#0#0#").unwrap());
        assert!(!in_injective("#0#0#").unwrap() && !in_surjective("#0#0#").unwrap());
        assert!(!in_permutation_filter("#0#0#").unwrap());
        assert!(in_permutation_filter("#00#01#10#11#").unwrap());
        assert!(in_injective("#00#01#10#").unwrap() && !in_surjective("#00#01#10#").unwrap());
    }

    #[test]
    fn permutation_is_injective_and_surjective() {
        let a = binary();
        for n in 1..=2 {
            let universe = 1usize << n;
            let blocks: Vec<Vec<String>> = all_words(2, n)
                .into_iter()
                .map(|w| w.iter().map(|&x| x.to_string()).collect())
                .collect();
            // every block sequence with up to universe + 1 blocks
            for count in 1..=universe + 1 {
                let total = universe.pow(count as u32);
                let mut perms = 0;
                for code in 0..total {
                    let mut c = code;
                    let seq = (0..count)
                        .map(|_| {
                            let b = blocks[c % universe].clone();
                            c /= universe;
                            b
                        })
                        .collect();
                    let w = BlockWord::new(seq).unwrap();
                    let p = Filter::Permutation.contains(&w, &a);
                    assert_eq!(
                        p,
                        Filter::Injective.contains(&w, &a) && Filter::Surjective.contains(&w, &a)
                    );
                    perms += p as usize;
                }
                let expected = if count == universe {
                    (1..=universe).product()
                } else {
                    0
                };
                assert_eq!(perms, expected);
            }
        }
    }

    #[test]
    fn track_products() {
        assert!(track_product_member("#a|0#a|1#", |_| true, |_| true).unwrap());
        let per = |w: &BlockWord| Filter::Periodic.contains(w, &["a".to_string()]);
        let pb = |w: &BlockWord| Filter::Permutation.contains(w, &binary());
        assert!(track_product_member("# a|0 # a|1 #", per, pb).unwrap());
        assert!(!track_product_member("# a|0 # a|0 #", per, pb).unwrap());
        assert!(project_tracks("#a0#").is_err());
    }

    #[test]
    fn brute_examples() {
        let all = Dfa::universal(&["0", "1", "#"]);
        let out =
            brute_realizability(&all, Filter::Permutation, BruteLimits::new(3, 1 << 20)).unwrap();
        assert_eq!(
            out,
            BruteOutcome::Witness {
                word: "#0#1#".into(),
                rank: 1
            }
        );
        let none = Dfa::empty(&["0", "1", "#"]);
        assert_eq!(
            brute_realizability(&none, Filter::Permutation, BruteLimits::new(3, 1 << 20)).unwrap(),
            BruteOutcome::Exhausted { max_rank: 3 }
        );
        // contains "#00#": states track the suffix read so far
        let r = bin_dfa(5, &[4], |q, a| match (q, a) {
            (4, _) => 4,
            (_, 2) if q == 3 => 4,
            (_, 2) => 1,
            (1, 0) => 2,
            (2, 0) => 3,
            _ => 0,
        });
        let out =
            brute_realizability(&r, Filter::Permutation, BruteLimits::new(3, 1 << 20)).unwrap();
        assert_eq!(
            out,
            BruteOutcome::Witness {
                word: "#00#01#10#11#".into(),
                rank: 2
            }
        );
    }

    #[test]
    fn brute_respects_budget() {
        let all = Dfa::universal(&["0", "1", "#"]);
        assert!(matches!(
            brute_realizability(&all, Filter::Permutation, BruteLimits::new(2, 2)),
            Err(Error::Refused(_))
        ));
    }

    #[test]
    fn surjective_needs_all_blocks() {
        let all = Dfa::universal(&["0", "1", "#"]);
        assert_eq!(
            brute_at_rank(&all, Filter::Surjective, 1, 1 << 16, 2)
                .unwrap()
                .as_deref(),
            Some("#0#1#")
        );
        assert_eq!(
            brute_at_rank(&all, Filter::Injective, 1, 1 << 16, 2)
                .unwrap()
                .as_deref(),
            Some("#0#")
        );
        assert_eq!(
            brute_at_rank(&all, Filter::Periodic, 2, 1 << 16, 2)
                .unwrap()
                .as_deref(),
            Some("#00#")
        );
    }
}
