//! Shared construction of the finite models: the inhabitants of `μF`/`νF`
//! plus shapes, positions, labelling functions, pairs, sorts and the
//! symbols that interpret them.

use std::collections::{BTreeMap, HashMap};

use super::encoding::{Encoding, ShapeSort};
use super::trees::all_labelings;
use super::EngineError;
use crate::container::Label;
use crate::elemset::ElemSet;
use crate::model::Model;

/// Largest carrier the model builders will produce by default.
pub const DEFAULT_MODEL_CAP: usize = 600;

#[derive(Default)]
struct Builder {
    names: Vec<String>,
    index: HashMap<String, usize>,
    apps: Vec<(usize, usize, usize)>,
    total: Vec<usize>,
    symbols: BTreeMap<String, Vec<usize>>,
}

impl Builder {
    fn add(&mut self, name: String) -> usize {
        assert!(!self.index.contains_key(&name), "element `{name}` named twice");
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        i
    }

    fn symbol(&mut self, name: &str, elems: Vec<usize>) {
        self.symbols.insert(name.to_string(), elems);
    }

    fn app(&mut self, a: usize, b: usize, r: usize) {
        self.apps.push((a, b, r));
    }
}

/// What the caller supplies about `μF`/`νF`.
pub(crate) struct Inhabitants<'a> {
    /// `muF` or `nuF`.
    pub sort: &'a str,
    pub names: Vec<String>,
    /// Inhabitants a labelling function may point to.
    pub codomain: Vec<usize>,
    /// `cons⟨a, f⟩` for a shape and successor inhabitants, when defined.
    pub realize: &'a dyn Fn(&Label, &[usize]) -> Option<usize>,
    /// Shape and successors of each inhabitant, for `out` and `nxt`.
    pub observe: Option<&'a dyn Fn(usize) -> (Label, Vec<usize>)>,
}

pub(crate) fn assemble(enc: &Encoding, inh: Inhabitants<'_>, cap: usize) -> Result<Model, EngineError> {
    // Size check before building anything large.
    let labelings_per_group: Vec<u128> = enc
        .groups
        .iter()
        .map(|g| (0..g.fiber.len()).fold(1u128, |p, _| p.saturating_mul(inh.codomain.len() as u128)))
        .collect();
    let estimate = enc.groups.iter().zip(&labelings_per_group).fold(
        inh.names.len() as u128 + 64,
        |acc, (g, &l)| {
            acc.saturating_add(l.saturating_mul(g.shapes.len() as u128 + 1))
                .saturating_add(2 * g.shapes.len() as u128 + g.fiber.len() as u128)
        },
    );
    if estimate > cap as u128 {
        return Err(EngineError::TooLarge {
            what: "model carrier",
            count: estimate,
            cap: cap as u128,
        });
    }

    let mut b = Builder::default();
    let inhabitants: Vec<usize> = inh.names.iter().map(|n| b.add(n.clone())).collect();

    let mut shape_elems: BTreeMap<Label, usize> = BTreeMap::new();
    for g in &enc.groups {
        for a in &g.shapes {
            shape_elems.insert(a.clone(), b.add(enc.shape_name(a).to_string()));
        }
    }
    let star = match enc.groups.iter().find(|g| g.shape_sort == ShapeSort::Star) {
        Some(g) => shape_elems[&g.shapes[0]],
        None => {
            let name = if b.index.contains_key("*") { "⋆" } else { "*" };
            b.add(name.to_string())
        }
    };
    let positions: Vec<Vec<usize>> = enc
        .position_names
        .iter()
        .map(|ps| ps.iter().map(|p| b.add(p.clone())).collect())
        .collect();
    let ini = b.add("¡".into());

    // Labelling functions per group: (element, successor inhabitants).
    let mut labelings: Vec<Vec<(usize, Vec<usize>)>> = Vec::new();
    for (k, g) in enc.groups.iter().enumerate() {
        if !g.has_positions() {
            labelings.push(vec![(ini, Vec::new())]);
            continue;
        }
        let mut group = Vec::new();
        for l in all_labelings(&g.fiber, &inh.codomain) {
            let targets: Vec<usize> = l.iter().map(|(_, t)| *t).collect();
            let body: Vec<String> = enc.position_names[k]
                .iter()
                .zip(&targets)
                .map(|(p, &t)| format!("{}:{}", &p[1..], inh.names[t]))
                .collect();
            let f = b.add(format!("f{{{}}}", body.join(",")));
            for (&p, &t) in positions[k].iter().zip(&targets) {
                b.app(f, p, inhabitants[t]);
            }
            group.push((f, targets));
        }
        labelings.push(group);
    }

    let cons = b.add("#cons".into());
    let pair = b.add("#pair".into());
    let fst = b.add("#fst".into());
    let snd = b.add("#snd".into());
    let mut labeling_of: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, g) in enc.groups.iter().enumerate() {
        for a in &g.shapes {
            let ae = shape_elems[a];
            let partial = b.add(format!("#pair({})", enc.shape_name(a)));
            b.app(pair, ae, partial);
            for (f, targets) in &labelings[k] {
                let pe = b.add(format!("⟨{},{}⟩", enc.shape_name(a), b.names[*f]));
                b.app(partial, *f, pe);
                b.app(fst, pe, ae);
                b.app(snd, pe, *f);
                if let Some(t) = (inh.realize)(a, targets) {
                    b.app(cons, pe, inhabitants[t]);
                }
                labeling_of.insert(*f, targets.clone());
            }
        }
    }

    // Sorts.
    let inh_sym = b.add("#inh".into());
    let sort_sort = b.add("^Sort".into());
    let main_sort = b.add(format!("^{}", inh.sort));
    let mut sorts = vec![sort_sort, main_sort];
    for &t in &inhabitants {
        b.app(inh_sym, main_sort, t);
    }
    let function = b.add("#Function".into());
    for (k, g) in enc.groups.iter().enumerate() {
        if let ShapeSort::Sort(s) = &g.shape_sort {
            let e = b.add(format!("^{s}"));
            for a in &g.shapes {
                b.app(inh_sym, e, shape_elems[a]);
            }
            b.symbol(s, vec![e]);
            sorts.push(e);
        }
        if let Some(bs) = &g.fiber_sort {
            let e = b.add(format!("^{bs}"));
            for &p in &positions[k] {
                b.app(inh_sym, e, p);
            }
            b.symbol(bs, vec![e]);
            let partial = b.add(format!("#Function(^{bs})"));
            b.app(function, e, partial);
            let fun_sort = b.add(format!("^({bs}->{})", inh.sort));
            b.app(partial, main_sort, fun_sort);
            for (f, _) in &labelings[k] {
                b.app(inh_sym, fun_sort, *f);
            }
            sorts.push(e);
            sorts.push(fun_sort);
        }
    }
    for &s in &sorts {
        b.app(inh_sym, sort_sort, s);
    }

    let def = b.add("#def".into());
    b.total.push(def);
    let fin = b.add("#finMor".into());

    b.symbol("cons", vec![cons]);
    b.symbol("pair", vec![pair]);
    b.symbol("fst", vec![fst]);
    b.symbol("snd", vec![snd]);
    b.symbol("inh", vec![inh_sym]);
    b.symbol("Sort", vec![sort_sort]);
    b.symbol(inh.sort, vec![main_sort]);
    b.symbol("Function", vec![function]);
    b.symbol("def", vec![def]);
    b.symbol("star", vec![star]);
    b.symbol("iniMor", vec![ini]);
    b.symbol("finMor", vec![fin]);

    if let Some(observe) = inh.observe {
        let out = b.add("#out".into());
        let nxt = b.add("#nxt".into());
        for (i, &t) in inhabitants.iter().enumerate() {
            let (shape, targets) = observe(i);
            b.app(out, t, shape_elems[&shape]);
            let k = enc.group_of(&shape);
            let f = labelings[k]
                .iter()
                .find(|(_, ts)| *ts == targets)
                .map(|(f, _)| *f)
                .expect("successors lie in the codomain");
            b.app(nxt, t, f);
        }
        b.symbol("out", vec![out]);
        b.symbol("nxt", vec![nxt]);
    }

    let n = b.names.len();
    let mut m = Model::new(b.names.clone())?;
    for &(x, y, r) in &b.apps {
        m.add_app(x, y, r);
    }
    for &t in &b.total {
        for y in 0..n {
            m.set_app(t, y, ElemSet::full(n));
        }
    }
    for y in 0..n {
        m.add_app(fin, y, star);
    }
    for (s, elems) in b.symbols {
        m.set_symbol(s, ElemSet::from_indices(n, elems));
    }
    Ok(m)
}
