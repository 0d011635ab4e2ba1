//! Runtime nets in canonical form.
//!
//! A [`CanonicalNet`] is a net up to structural congruence: restrictions
//! are pulled to the outside, parallel compositions are flattened into a
//! multiset of located processes and tables, and inert processes are
//! dropped.

mod locs;

use std::collections::BTreeSet;

pub use locs::{rename_loc, MapLocs};

use crate::syntax::ast::{Component, Loc, Net, Process, Table, TableId};
use crate::syntax::vars::{free_locs, process_locs};
use crate::values::Multiset;

/// What sits at a locality: a process or a table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Item {
    Proc(Process),
    Table(Table),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Located {
    pub loc: Loc,
    pub item: Item,
}

impl Located {
    pub fn proc(loc: Loc, p: Process) -> Self {
        Located { loc, item: Item::Proc(p) }
    }

    pub fn table(loc: Loc, t: Table) -> Self {
        Located { loc, item: Item::Table(t) }
    }
}

/// `(ν l1)…(ν lk)(l::C1 || … || l::Cn)`, possibly in parallel with `ERR`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalNet {
    pub restricted: Vec<Loc>,
    pub items: Multiset<Located>,
    pub err: bool,
}

/// Multiset of `(locality, table identifier)` pairs.
pub type LidMultiset = Multiset<(Loc, TableId)>;

/// Drops inert left operands of sequential compositions at the head.
pub fn normalize_head(p: Process) -> Process {
    match p {
        Process::Seq(a, b) => {
            let a = normalize_head(*a);
            if a.is_nil() {
                normalize_head(*b)
            } else {
                Process::Seq(Box::new(a), b)
            }
        }
        p => p,
    }
}

impl CanonicalNet {
    /// The collapsed error net.
    pub fn error() -> Self {
        CanonicalNet { err: true, ..Self::default() }
    }

    pub fn canonicalize(n: &Net) -> Self {
        let mut out = CanonicalNet::default();
        let mut claimed: BTreeSet<Loc> = free_locs(n);
        out.flatten(n, &mut claimed);
        out
    }

    fn flatten(&mut self, n: &Net, claimed: &mut BTreeSet<Loc>) {
        match n {
            Net::Nil => {}
            Net::Err => self.err = true,
            Net::Par(a, b) => {
                self.flatten(a, claimed);
                self.flatten(b, claimed);
            }
            Net::Restrict(l, m) => {
                if claimed.contains(l) {
                    let fresh = fresh_loc(l, claimed);
                    let renamed = rename_loc(m.as_ref(), l, &fresh);
                    claimed.insert(fresh.clone());
                    self.restricted.push(fresh);
                    self.flatten(&renamed, claimed);
                } else {
                    claimed.insert(l.clone());
                    self.restricted.push(l.clone());
                    self.flatten(m, claimed);
                }
            }
            Net::Node(l, c) => self.component(l, c),
        }
    }

    fn component(&mut self, l: &Loc, c: &Component) {
        match c {
            Component::Proc(p) => self.add_process(l.clone(), p.clone()),
            Component::Tab(t, _) => self.items.insert(Located::table(l.clone(), t.clone())),
            Component::Par(a, b) => {
                self.component(l, a);
                self.component(l, b);
            }
        }
    }

    /// Adds `l::p` unless `p` is inert.
    pub fn add_process(&mut self, l: Loc, p: Process) {
        let p = normalize_head(p);
        if !p.is_nil() {
            self.items.insert(Located::proc(l, p));
        }
    }

    /// Back to a syntactic net: restrictions around a right-nested parallel
    /// composition of nodes.
    pub fn to_net(&self) -> Net {
        let mut parts: Vec<Net> = self
            .items
            .expanded()
            .map(|x| match &x.item {
                Item::Proc(p) => Net::Node(x.loc.clone(), Component::Proc(p.clone())),
                Item::Table(t) => Net::Node(x.loc.clone(), Component::Tab(t.clone(), Default::default())),
            })
            .collect();
        if self.err {
            parts.push(Net::Err);
        }
        let mut net = Net::par_all(parts);
        for l in self.restricted.iter().rev() {
            net = Net::Restrict(l.clone(), Box::new(net));
        }
        net
    }

    pub fn ok(&self) -> bool {
        !self.err
    }

    pub fn lid(&self) -> LidMultiset {
        let mut out = Multiset::new();
        for (x, n) in self.items.iter() {
            if let Item::Table(t) = &x.item {
                if let Some(tid) = &t.iface.tid {
                    out.insert_n((x.loc.clone(), tid.clone()), *n);
                }
            }
        }
        out
    }

    pub fn tables(&self) -> impl Iterator<Item = (&Loc, &Table)> {
        self.items.expanded().filter_map(|x| match &x.item {
            Item::Table(t) => Some((&x.loc, t)),
            Item::Proc(_) => None,
        })
    }

    pub fn processes(&self) -> impl Iterator<Item = (&Loc, &Process)> {
        self.items.support().filter_map(|x| match &x.item {
            Item::Proc(p) => Some((&x.loc, p)),
            Item::Table(_) => None,
        })
    }

    /// Distinct tables at `loc` with identifier `tid`.
    pub fn find_tables(&self, loc: &Loc, tid: &TableId) -> Vec<&Table> {
        self.items
            .support()
            .filter(|x| x.loc == *loc)
            .filter_map(|x| match &x.item {
                Item::Table(t) if t.iface.tid.as_ref() == Some(tid) => Some(t),
                _ => None,
            })
            .collect()
    }

    /// Every locality mentioned: node sites, restricted names, and literals
    /// inside processes and table rows.
    pub fn locs(&self) -> BTreeSet<Loc> {
        let mut out: BTreeSet<Loc> = self.restricted.iter().cloned().collect();
        for x in self.items.support() {
            out.insert(x.loc.clone());
            match &x.item {
                Item::Proc(p) => process_locs(p, &mut out),
                Item::Table(t) => {
                    let n = Net::Node(x.loc.clone(), Component::Tab(t.clone(), Default::default()));
                    out.extend(free_locs(&n));
                }
            }
        }
        out
    }

    /// Representative of the α-equivalence class: restricted names are
    /// replaced by positional names, choosing the least result over all
    /// orderings when there are few enough restrictions.
    pub fn alpha_key(&self) -> CanonicalNet {
        if self.restricted.is_empty() {
            return self.clone();
        }
        let k = self.restricted.len();
        let mut best: Option<CanonicalNet> = None;
        let mut perm: Vec<usize> = (0..k).collect();
        loop {
            let candidate = self.with_positional_names(&perm);
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
            if k > 5 || !next_permutation(&mut perm) {
                break;
            }
        }
        best.expect("at least one ordering")
    }

    fn with_positional_names(&self, perm: &[usize]) -> CanonicalNet {
        let names: Vec<(Loc, Loc)> = self
            .restricted
            .iter()
            .zip(perm)
            .map(|(l, &i)| (l.clone(), Loc(format!("#{i}"))))
            .collect();
        let f = |l: &Loc| names.iter().find(|(a, _)| a == l).map_or_else(|| l.clone(), |(_, b)| b.clone());
        let mut restricted: Vec<Loc> = names.iter().map(|(_, b)| b.clone()).collect();
        restricted.sort();
        let items = self.items.map(|x| Located {
            loc: f(&x.loc),
            item: match &x.item {
                Item::Proc(p) => Item::Proc(p.map_locs(&f)),
                Item::Table(t) => Item::Table(t.map_locs(&f)),
            },
        });
        CanonicalNet { restricted, items, err: self.err }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// A locality `base#k` not in `taken`.
pub fn fresh_loc(l: &Loc, taken: &BTreeSet<Loc>) -> Loc {
    let base = l.0.split('#').next().unwrap_or(&l.0);
    (1..)
        .map(|k| Loc(format!("{base}#{k}")))
        .find(|c| !taken.contains(c))
        .expect("unbounded supply of names")
}

/// `lid(N)` on syntactic nets.
pub fn lid(n: &Net) -> LidMultiset {
    fn comp(l: &Loc, c: &Component, out: &mut LidMultiset) {
        match c {
            Component::Proc(_) => {}
            Component::Tab(t, _) => {
                if let Some(tid) = &t.iface.tid {
                    out.insert((l.clone(), tid.clone()));
                }
            }
            Component::Par(a, b) => {
                comp(l, a, out);
                comp(l, b, out);
            }
        }
    }
    fn go(n: &Net, out: &mut LidMultiset) {
        match n {
            Net::Nil | Net::Err => {}
            Net::Par(a, b) => {
                go(a, out);
                go(b, out);
            }
            Net::Restrict(_, m) => go(m, out),
            Net::Node(l, c) => comp(l, c, out),
        }
    }
    let mut out = Multiset::new();
    go(n, &mut out);
    out
}

/// `NoRep(A)`: every element occurs once.
pub fn no_rep<T: Ord>(m: &Multiset<T>) -> bool {
    m.is_set()
}
