//! Online DAWG (suffix automaton) construction over an ordered alphabet.
//!
//! Follows the classic Blumer et al. update: a new sink, secondary edges
//! along the suffix-link chain, and a split when the chain reaches a
//! secondary edge. Every state records the length of its longest member,
//! the first ending position of its members (`pos`, 1-based), the state
//! holding its incoming primary edge, and a labeled suffix link. Each
//! `extend` reports the structural changes as [`DawgEvent`]s so that
//! clients can maintain per-state side tables (the packed factorizer's
//! point sets, the RLE factorizer's dominant sets) without rescanning.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{Debug, Write as _};
use std::hash::Hash;

/// Alphabet symbol of a DAWG.
pub trait Symbol: Copy + Ord + Eq + Hash + Debug {}
impl<T: Copy + Ord + Eq + Hash + Debug> Symbol for T {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
pub struct State<S> {
    len: usize,
    pos: usize,
    link: Option<(StateId, S)>,
    primary_parent: Option<StateId>,
    edges: BTreeMap<S, StateId>,
}

/// Structural change reported by [`Dawg::extend`], in mutation order.
///
/// `end` fields give the (1-based) symbol index at which an occurrence of
/// the preceded string ends, so clients can locate the occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DawgEvent<S> {
    /// New sink with its primary edge from the previous sink.
    NewSink {
        sink: StateId,
        parent: StateId,
        symbol: S,
    },
    /// Secondary edge `from --symbol--> to`; `preceding` is the unique
    /// symbol in front of every occurrence of `longest(from) symbol`.
    SecondaryEdgeAdded {
        from: StateId,
        symbol: S,
        to: StateId,
        preceding: S,
        end: usize,
    },
    /// Suffix link of the new sink. `target_parent` is the state owning the
    /// primary edge into `target` (none when `target` is the source).
    SuffixLinkSet {
        state: StateId,
        target: StateId,
        label: S,
        target_parent: Option<StateId>,
        end: usize,
    },
    /// `old` was split; the members of length `<= len(new)` moved to `new`.
    StateSplit { old: StateId, new: StateId },
    /// Secondary edge copied onto a freshly split state.
    SplitCopiedEdge {
        from: StateId,
        symbol: S,
        to: StateId,
        preceding: S,
        end: usize,
    },
}

#[derive(Clone, Debug)]
pub struct Dawg<S> {
    states: Vec<State<S>>,
    sink: StateId,
    text: Vec<S>,
    reverse_links: HashMap<(StateId, S), StateId>,
    edge_count: usize,
}

impl<S: Symbol> Default for Dawg<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Symbol> Dawg<S> {
    pub const SOURCE: StateId = StateId(0);

    pub fn new() -> Self {
        Dawg {
            states: vec![State {
                len: 0,
                pos: 0,
                link: None,
                primary_parent: None,
                edges: BTreeMap::new(),
            }],
            sink: Self::SOURCE,
            text: Vec::new(),
            reverse_links: HashMap::new(),
            edge_count: 0,
        }
    }

    /// Builds the DAWG of a whole sequence, discarding events.
    pub fn build(symbols: &[S]) -> Self {
        let mut d = Self::new();
        let mut ev = Vec::new();
        for &s in symbols {
            ev.clear();
            d.extend_into(s, &mut ev);
        }
        d
    }

    pub fn source(&self) -> StateId {
        Self::SOURCE
    }

    pub fn sink(&self) -> StateId {
        self.sink
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Number of symbols consumed.
    pub fn symbol_count(&self) -> usize {
        self.text.len()
    }

    /// Consumed symbol at 1-based index `i`.
    #[inline]
    pub fn symbol_at(&self, i: usize) -> S {
        self.text[i - 1]
    }

    pub fn symbols(&self) -> &[S] {
        &self.text
    }

    #[inline]
    pub fn len(&self, s: StateId) -> usize {
        self.states[s.index()].len
    }

    #[inline]
    pub fn pos(&self, s: StateId) -> usize {
        self.states[s.index()].pos
    }

    pub fn suffix_link(&self, s: StateId) -> Option<(StateId, S)> {
        self.states[s.index()].link
    }

    pub fn primary_parent(&self, s: StateId) -> Option<StateId> {
        self.states[s.index()].primary_parent
    }

    #[inline]
    pub fn transition(&self, s: StateId, a: S) -> Option<StateId> {
        self.states[s.index()].edges.get(&a).copied()
    }

    /// Whether `s --a--> t` is a primary edge.
    pub fn is_primary(&self, s: StateId, t: StateId) -> bool {
        self.len(s) + 1 == self.len(t)
    }

    pub fn edges(&self, s: StateId) -> impl DoubleEndedIterator<Item = (S, StateId)> + '_ {
        self.states[s.index()].edges.iter().map(|(&k, &v)| (k, v))
    }

    pub fn edges_in<R>(&self, s: StateId, range: R) -> impl DoubleEndedIterator<Item = (S, StateId)> + '_
    where
        R: std::ops::RangeBounds<S>,
    {
        self.states[s.index()].edges.range(range).map(|(&k, &v)| (k, v))
    }

    /// Largest out-edge symbol below `a` and smallest above `a`.
    pub fn edge_neighbors(&self, s: StateId, a: S) -> (Option<S>, Option<S>) {
        use std::ops::Bound::{Excluded, Unbounded};
        let e = &self.states[s.index()].edges;
        let pred = e.range((Unbounded, Excluded(a))).next_back().map(|(&k, _)| k);
        let succ = e.range((Excluded(a), Unbounded)).next().map(|(&k, _)| k);
        (pred, succ)
    }

    /// The state whose suffix link is `(s, a)`, if any.
    pub fn suffix_link_reverse_lookup(&self, s: StateId, a: S) -> Option<StateId> {
        self.reverse_links.get(&(s, a)).copied()
    }

    /// State reached by spelling `w` from the source.
    pub fn walk(&self, w: &[S]) -> Option<StateId> {
        w.iter()
            .try_fold(Self::SOURCE, |s, &a| self.transition(s, a))
    }

    fn new_state(&mut self, len: usize, pos: usize, primary_parent: Option<StateId>) -> StateId {
        let id = StateId(self.states.len() as u32);
        self.states.push(State {
            len,
            pos,
            link: None,
            primary_parent,
            edges: BTreeMap::new(),
        });
        id
    }

    fn add_edge(&mut self, from: StateId, a: S, to: StateId) {
        if self.states[from.index()].edges.insert(a, to).is_none() {
            self.edge_count += 1;
        }
    }

    fn set_link(&mut self, s: StateId, target: StateId, label: S) {
        if let Some(old) = self.states[s.index()].link.take() {
            if self.reverse_links.get(&old) == Some(&s) {
                self.reverse_links.remove(&old);
            }
        }
        self.states[s.index()].link = Some((target, label));
        self.reverse_links.insert((target, label), s);
    }

    /// Label of a suffix link from `s` to `target`: the symbol in front of
    /// `longest(target)` inside `longest(s)`.
    fn link_label(&self, s: StateId, target: StateId) -> S {
        self.symbol_at(self.pos(s) - self.len(target))
    }

    /// Appends `b`, returning the events of the update.
    pub fn extend(&mut self, b: S) -> Vec<DawgEvent<S>> {
        let mut ev = Vec::new();
        self.extend_into(b, &mut ev);
        ev
    }

    /// Appends `b`, pushing the update's events onto `events`.
    pub fn extend_into(&mut self, b: S, events: &mut Vec<DawgEvent<S>>) {
        self.text.push(b);
        let n = self.text.len();
        let old_sink = self.sink;
        let new_sink = self.new_state(self.len(old_sink) + 1, n, Some(old_sink));
        self.add_edge(old_sink, b, new_sink);
        events.push(DawgEvent::NewSink {
            sink: new_sink,
            parent: old_sink,
            symbol: b,
        });

        let mut cur = old_sink;
        let mut suffix_state = None;
        while cur != Self::SOURCE && suffix_state.is_none() {
            cur = self.states[cur.index()].link.expect("non-source state has a link").0;
            match self.transition(cur, b) {
                None => {
                    self.add_edge(cur, b, new_sink);
                    let preceding = self.symbol_at(n - self.len(cur) - 1);
                    events.push(DawgEvent::SecondaryEdgeAdded {
                        from: cur,
                        symbol: b,
                        to: new_sink,
                        preceding,
                        end: n,
                    });
                }
                Some(child) if self.is_primary(cur, child) => suffix_state = Some(child),
                Some(child) => suffix_state = Some(self.split(cur, b, child, events)),
            }
        }
        let target = suffix_state.unwrap_or(Self::SOURCE);
        let label = self.link_label(new_sink, target);
        self.set_link(new_sink, target, label);
        events.push(DawgEvent::SuffixLinkSet {
            state: new_sink,
            target,
            label,
            target_parent: self.primary_parent(target),
            end: n,
        });
        self.sink = new_sink;
    }

    fn split(
        &mut self,
        parent: StateId,
        a: S,
        child: StateId,
        events: &mut Vec<DawgEvent<S>>,
    ) -> StateId {
        let new_child = self.new_state(self.len(parent) + 1, self.pos(child), Some(parent));
        self.states[parent.index()].edges.insert(a, new_child);
        events.push(DawgEvent::StateSplit {
            old: child,
            new: new_child,
        });
        let copied: Vec<(S, StateId)> = self.edges(child).collect();
        for (c, dest) in copied {
            self.add_edge(new_child, c, dest);
            let end = self.pos(dest);
            let preceding = self.symbol_at(end - self.len(new_child) - 1);
            events.push(DawgEvent::SplitCopiedEdge {
                from: new_child,
                symbol: c,
                to: dest,
                preceding,
                end,
            });
        }
        let (old_target, _) = self.states[child.index()].link.expect("split state has a link");
        let l1 = self.link_label(new_child, old_target);
        self.set_link(new_child, old_target, l1);
        let l2 = self.link_label(child, new_child);
        self.set_link(child, new_child, l2);

        let mut cur = parent;
        while cur != Self::SOURCE {
            cur = self.states[cur.index()].link.expect("non-source state has a link").0;
            if self.transition(cur, a) == Some(child) {
                self.states[cur.index()].edges.insert(a, new_child);
            } else {
                break;
            }
        }
        new_child
    }

    /// Graphviz rendering: edges solid (primary bold), suffix links dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dawg {\n  rankdir=LR;\n");
        for (i, st) in self.states.iter().enumerate() {
            let _ = writeln!(out, "  s{i} [label=\"{}\"];", st.pos);
            for (sym, to) in &st.edges {
                let style = if st.len + 1 == self.states[to.index()].len {
                    "bold"
                } else {
                    "solid"
                };
                let _ = writeln!(out, "  s{i} -> s{} [label=\"{sym:?}\", style={style}];", to.0);
            }
            if let Some((t, lab)) = st.link {
                let _ = writeln!(out, "  s{i} -> s{} [label=\"{lab:?}\", style=dashed];", t.0);
            }
        }
        out.push_str("}\n");
        out
    }
}
