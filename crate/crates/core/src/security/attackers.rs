//! Enumeration of high-level attacker processes.
//!
//! Attackers are closed terms over the grammar `Q ::= 0 | h.Q | Q + Q`
//! with `h` drawn from a given set of high actions. Depth counts action
//! nesting and choice nesting alike, with `0` at depth zero. Choices are
//! kept in canonical operand order (left strictly below right), which
//! prunes commutative duplicates and the degenerate `Q + Q`.

use crate::syntax::{ActionSet, Term, TermArena, TermId};

/// An attacker process term. The derived order (nil, then prefixes, then
/// choices, recursing left to right) is the tie-breaker after size in
/// enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Attacker {
    Nil,
    Prefix(String, Box<Attacker>),
    Choice(Box<Attacker>, Box<Attacker>),
}

impl Attacker {
    /// Number of grammar nodes.
    pub fn size(&self) -> usize {
        match self {
            Attacker::Nil => 1,
            Attacker::Prefix(_, q) => 1 + q.size(),
            Attacker::Choice(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Interns the attacker into `arena` as an ordinary process term.
    pub fn intern(&self, arena: &mut TermArena) -> TermId {
        match self {
            Attacker::Nil => arena.add(Term::Nil),
            Attacker::Prefix(h, q) => {
                let cont = q.intern(arena);
                arena.add(Term::Prefix(
                    crate::syntax::Action::visible(h.clone()),
                    cont,
                ))
            }
            Attacker::Choice(l, r) => {
                let li = l.intern(arena);
                let ri = r.intern(arena);
                arena.add(Term::Choice(li, ri))
            }
        }
    }
}

/// All attackers over `high` up to `depth`, in size-then-structural order.
pub fn enumerate_attackers(high: &ActionSet, depth: usize) -> Vec<Attacker> {
    enumerate_attackers_capped(high, depth, usize::MAX).0
}

/// Capped variant: each generation is truncated to the `cap` smallest
/// terms, so deep enumerations degrade by dropping the largest attackers
/// first. Returns whether truncation happened anywhere.
pub(super) fn enumerate_attackers_capped(
    high: &ActionSet,
    depth: usize,
    cap: usize,
) -> (Vec<Attacker>, bool) {
    let mut cur: Vec<Attacker> = vec![Attacker::Nil];
    let mut capped = false;
    for _ in 0..depth {
        let mut next: Vec<Attacker> = vec![Attacker::Nil];
        for h in high.iter() {
            for q in &cur {
                next.push(Attacker::Prefix(h.to_string(), Box::new(q.clone())));
            }
        }
        // cur is sorted and deduplicated, so index order gives the strict
        // operand order that canonicalizes choice.
        for (i, l) in cur.iter().enumerate() {
            for r in &cur[i + 1..] {
                next.push(Attacker::Choice(Box::new(l.clone()), Box::new(r.clone())));
            }
        }
        next.sort_unstable_by(|a, b| (a.size(), a).cmp(&(b.size(), b)));
        next.dedup();
        if next.len() > cap {
            next.truncate(cap);
            capped = true;
        }
        // Re-establish structural order for the next generation's choice
        // pairing; the final size-then-structural sort happens below.
        next.sort_unstable();
        cur = next;
    }
    cur.sort_unstable_by(|a, b| (a.size(), a).cmp(&(b.size(), b)));
    (cur, capped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::render_term;

    fn names(high: &[&str], depth: usize) -> Vec<String> {
        let set: ActionSet = high.iter().map(|s| s.to_string()).collect();
        enumerate_attackers(&set, depth)
            .iter()
            .map(|a| {
                let mut arena = TermArena::new();
                let id = a.intern(&mut arena);
                render_term(&arena, id)
            })
            .collect()
    }

    #[test]
    fn empty_alphabet_gives_only_nil() {
        assert_eq!(names(&[], 4), ["0"]);
    }

    #[test]
    fn depth_one_single_action() {
        assert_eq!(names(&["h"], 1), ["0", "h . 0"]);
    }

    #[test]
    fn depth_two_contains_the_two_step_attacker() {
        let all = names(&["h1", "h2"], 2);
        assert!(all.contains(&"h1 . h2 . 0".to_string()));
        assert!(all.contains(&"h1 . 0 + h2 . 0".to_string()));
        // Commutative duplicate is pruned.
        assert!(!all.contains(&"h2 . 0 + h1 . 0".to_string()));
        // Idempotent choice is pruned.
        assert!(!all.iter().any(|s| s == "0 + 0" || s == "h1 . 0 + h1 . 0"));
    }

    #[test]
    fn order_is_size_then_structure() {
        let set: ActionSet = ["h".to_string()].into_iter().collect();
        let all = enumerate_attackers(&set, 3);
        for w in all.windows(2) {
            let key = |a: &Attacker| (a.size(), a.clone());
            assert!(key(&w[0]) < key(&w[1]));
        }
        // Depth three over one action: 0, h.0, h.h.0, h.h.h.0 and the
        // choices of distinct operands up to that depth.
        assert_eq!(all.first().unwrap(), &Attacker::Nil);
        assert!(all.len() > 4);
    }

    #[test]
    fn cap_drops_largest_terms() {
        let set: ActionSet = ["h1".to_string(), "h2".to_string()].into_iter().collect();
        let (capped, hit) = enumerate_attackers_capped(&set, 3, 5);
        assert!(hit);
        assert_eq!(capped.len(), 5);
        let (full, _) = enumerate_attackers_capped(&set, 3, usize::MAX);
        assert_eq!(&full[..5], &capped[..]);
    }
}
