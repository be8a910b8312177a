//! Line-oriented text format for example bundles.
//!
//! A document is a sequence of single-line statements and blocks closed by
//! `end`. Blank lines are ignored; leading whitespace inside blocks is
//! conventional. Scalars are exact literals (integers, rationals, Laurent
//! polynomials in `t`), elements are sums of `(literal)*key` terms, and `0`
//! is the zero element. `render_bundle` emits the canonical form, and
//! `parse_bundle(render_bundle(b)) == b` byte-for-byte on canonical input.

use std::collections::BTreeMap;

use crate::algebra::{AlgebraElement, DgaPresentation, GradedBasis, GroupDecl};
use crate::bundle::{
    Bundle, CocycleDecl, CoeffSystem, CoeffTag, Expectation, MapDecl, MapKind, PairingDecl,
};
use crate::cocycle::{CocycleKind, CocycleMatrix, CriticalBasis};
use crate::error::Error;
use crate::group::{GroupSpec, SignCharacter};
use crate::homology::GroupModule;
use crate::matrix::Mat;
use crate::module::{DgModulePresentation, GradingSense, ModuleElement};
use crate::scalar::{ScalarCtx, ScalarLit};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::SyntaxError { line, col: 1, msg: msg.into() }
}

fn parse_i64(line: usize, s: &str) -> Result<i64, Error> {
    s.parse().map_err(|_| err(line, format!("expected an integer, found `{s}`")))
}

fn parse_usize(line: usize, s: &str) -> Result<usize, Error> {
    s.parse().map_err(|_| err(line, format!("expected a count, found `{s}`")))
}

fn parse_lit(line: usize, s: &str) -> Result<ScalarLit, Error> {
    ScalarLit::parse(s).map_err(|e| err(line, format!("bad scalar literal `{s}`: {e}")))
}

fn scalar_tok(ctx: &ScalarCtx) -> String {
    match ctx {
        ScalarCtx::Int => "Z".into(),
        ScalarCtx::Rat => "Q".into(),
        ScalarCtx::Fp(p) => format!("F{p}"),
        ScalarCtx::LaurentRat => "laurent".into(),
    }
}

fn parse_scalar_tok(line: usize, s: &str) -> Result<ScalarCtx, Error> {
    match s {
        "Z" => Ok(ScalarCtx::Int),
        "Q" => Ok(ScalarCtx::Rat),
        "laurent" => Ok(ScalarCtx::LaurentRat),
        _ => match s.strip_prefix('F').and_then(|p| p.parse::<u64>().ok()) {
            Some(p) if p >= 2 => Ok(ScalarCtx::Fp(p)),
            _ => Err(err(line, format!("unknown scalar system `{s}`"))),
        },
    }
}

fn kind_tok(kind: CocycleKind) -> &'static str {
    match kind {
        CocycleKind::Twisting => "twisting",
        CocycleKind::CohTwisting => "coh-twisting",
        CocycleKind::Continuation => "continuation",
        CocycleKind::Homotopy => "homotopy",
    }
}

fn parse_kind_tok(line: usize, s: &str) -> Result<CocycleKind, Error> {
    match s {
        "twisting" => Ok(CocycleKind::Twisting),
        "coh-twisting" => Ok(CocycleKind::CohTwisting),
        "continuation" => Ok(CocycleKind::Continuation),
        "homotopy" => Ok(CocycleKind::Homotopy),
        _ => Err(err(line, format!("unknown cocycle kind `{s}`"))),
    }
}

/// Split a sum into `(literal)*key` terms at top-level ` + ` separators
/// (the literal inside the parentheses may itself contain `+` and `-`).
fn split_terms(line: usize, s: &str) -> Result<Vec<(ScalarLit, String)>, Error> {
    let mut terms = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(err(line, format!("expected `(literal)*key` term, found `{rest}`")));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| err(line, "unclosed parenthesis in element".to_string()))?;
        let lit = parse_lit(line, &rest[1..close])?;
        let after = &rest[close + 1..];
        let after = after
            .strip_prefix('*')
            .ok_or_else(|| err(line, "expected `*` after scalar literal".to_string()))?;
        let (key, tail) = match after.find(" + ") {
            Some(i) => (&after[..i], &after[i + 3..]),
            None => (after, ""),
        };
        if key.is_empty() {
            return Err(err(line, "empty key in element term".to_string()));
        }
        terms.push((lit, key.to_string()));
        rest = tail;
    }
    Ok(terms)
}

fn parse_alg_elt(
    line: usize,
    dga: &DgaPresentation<ScalarLit>,
    s: &str,
    degree: i64,
) -> Result<AlgebraElement<ScalarLit>, Error> {
    let mut out = AlgebraElement::zero(degree);
    if s.trim() == "0" {
        return Ok(out);
    }
    for (lit, key) in split_terms(line, s)? {
        let k = if dga.basis.degree_of(&key).is_some() {
            dga.resolve_key(&key)
                .map_err(|e| err(line, format!("cannot resolve key `{key}`: {e}")))?
        } else if let Some(gd) = &dga.group {
            crate::algebra::AlgKey::Grp(
                gd.spec
                    .parse_elt(&key)
                    .map_err(|e| err(line, format!("bad group word `{key}`: {e}")))?,
            )
        } else {
            return Err(err(line, format!("unknown algebra key `{key}`")));
        };
        if dga.key_degree(&k) != degree {
            return Err(err(
                line,
                format!("key `{key}` has degree {}, element requires {degree}", dga.key_degree(&k)),
            ));
        }
        let prev = out.terms.remove(&k).unwrap_or_else(ScalarLit::zero);
        out.terms.insert(k, ScalarLit::add(&prev, &lit));
    }
    out.terms.retain(|_, c| !c.is_zero());
    Ok(out)
}

fn parse_mod_elt(
    line: usize,
    basis: &GradedBasis,
    s: &str,
    degree: i64,
) -> Result<ModuleElement<ScalarLit>, Error> {
    let mut out = ModuleElement::zero(degree);
    if s.trim() == "0" {
        return Ok(out);
    }
    for (lit, key) in split_terms(line, s)? {
        let d = basis
            .degree_of(&key)
            .ok_or_else(|| err(line, format!("unknown module generator `{key}`")))?;
        if d != degree {
            return Err(err(
                line,
                format!("generator `{key}` has degree {d}, element requires {degree}"),
            ));
        }
        let prev = out.terms.remove(&key).unwrap_or_else(ScalarLit::zero);
        out.terms.insert(key, ScalarLit::add(&prev, &lit));
    }
    out.terms.retain(|_, c| !c.is_zero());
    Ok(out)
}

fn render_mod_elt(e: &ModuleElement<ScalarLit>) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = e.terms.iter().map(|(k, c)| format!("({c})*{k}")).collect();
    parts.join(" + ")
}

fn parse_matrix(line: usize, s: &str, rank: usize) -> Result<Mat<ScalarLit>, Error> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| err(line, "matrix literal must be bracketed".to_string()))?;
    let mut mat: Mat<ScalarLit> = Mat::zero(rank, rank);
    let rows: Vec<&str> = inner.split(';').collect();
    if rows.len() != rank {
        return Err(err(line, format!("matrix has {} rows, expected {rank}", rows.len())));
    }
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != rank {
            return Err(err(line, format!("row {} has {} columns, expected {rank}", i + 1, cells.len())));
        }
        for (j, cell) in cells.iter().enumerate() {
            mat[(i, j)] = parse_lit(line, cell.trim())?;
        }
    }
    Ok(mat)
}

fn render_matrix(m: &Mat<ScalarLit>) -> String {
    let rows: Vec<String> = (0..m.rows)
        .map(|i| {
            (0..m.cols).map(|j| format!("{}", m[(i, j)])).collect::<Vec<_>>().join(", ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct Item {
    line: usize,
    head: Vec<String>,
    body: Vec<(usize, String)>,
}

/// Cut a line into head tokens and an optional value after the first ` = `.
fn cut(line: &str) -> (Vec<String>, Option<String>) {
    match line.split_once(" = ") {
        Some((head, value)) => (
            head.split_whitespace().map(String::from).collect(),
            Some(value.trim().to_string()),
        ),
        None => (line.split_whitespace().map(String::from).collect(), None),
    }
}

const BLOCK_HEADS: &[&str] =
    &["dga", "module", "gmodule", "character", "critical", "cocycle", "map", "pairing"];

fn items(text: &str) -> Result<Vec<Item>, Error> {
    let mut out: Vec<Item> = Vec::new();
    let mut open: Option<Item> = None;
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(item) = open.as_mut() {
            if line == "end" {
                out.push(open.take().unwrap());
            } else {
                item.body.push((no, line.to_string()));
            }
            continue;
        }
        let head: Vec<String> = line.split_whitespace().map(String::from).collect();
        if line == "end" {
            return Err(err(no, "`end` without an open block"));
        }
        if BLOCK_HEADS.contains(&head[0].as_str()) {
            open = Some(Item { line: no, head, body: Vec::new() });
        } else {
            out.push(Item { line: no, head, body: Vec::new() });
        }
    }
    if let Some(item) = open {
        return Err(err(item.line, format!("block `{}` is never closed", item.head[0])));
    }
    Ok(out)
}

fn want_args(item: &Item, n: usize) -> Result<(), Error> {
    if item.head.len() != n + 1 {
        return Err(err(
            item.line,
            format!("`{}` takes {n} argument(s), found {}", item.head[0], item.head.len() - 1),
        ));
    }
    Ok(())
}

fn value_of(line: usize, s: &str) -> Result<(Vec<String>, String), Error> {
    let (head, value) = cut(s);
    let value = value.ok_or_else(|| err(line, format!("`{s}` needs a ` = ` value")))?;
    Ok((head, value))
}

pub fn parse_bundle(text: &str) -> Result<Bundle, Error> {
    let mut name: Option<String> = None;
    let mut ambient: Option<i64> = None;
    let mut notes = Vec::new();
    let mut group: Option<GroupSpec> = None;
    let mut dga: Option<DgaPresentation<ScalarLit>> = None;
    let mut modules = BTreeMap::new();
    let mut gmodules = BTreeMap::new();
    let mut criticals = BTreeMap::new();
    let mut cocycles: BTreeMap<String, CocycleDecl> = BTreeMap::new();
    let mut characters = BTreeMap::new();
    let mut maps = BTreeMap::new();
    let mut pairings = BTreeMap::new();
    let mut coeffs = BTreeMap::new();
    let mut expects = Vec::new();

    for item in items(text)? {
        let no = item.line;
        match item.head[0].as_str() {
            "bundle" => {
                want_args(&item, 1)?;
                name = Some(item.head[1].clone());
            }
            "ambient" => {
                want_args(&item, 1)?;
                ambient = Some(parse_i64(no, &item.head[1])?);
            }
            "note" => {
                let text = item.head[1..].join(" ");
                notes.push(text);
            }
            "group" => {
                if item.head.len() < 2 {
                    return Err(err(no, "`group` needs a kind"));
                }
                group = Some(parse_group(no, &item.head[1..])?);
            }
            "dga" => {
                want_args(&item, 0)?;
                dga = Some(parse_dga_block(&item, group.clone())?);
            }
            "module" => {
                want_args(&item, 1)?;
                let d = dga.as_ref().ok_or_else(|| err(no, "`module` before `dga`"))?;
                modules.insert(item.head[1].clone(), parse_module_block(&item, d)?);
            }
            "gmodule" => {
                want_args(&item, 1)?;
                gmodules.insert(item.head[1].clone(), parse_gmodule_block(&item)?);
            }
            "character" => {
                want_args(&item, 1)?;
                characters.insert(item.head[1].clone(), parse_character_block(&item)?);
            }
            "critical" => {
                want_args(&item, 1)?;
                let amb = ambient.ok_or_else(|| err(no, "`critical` before `ambient`"))?;
                criticals.insert(item.head[1].clone(), parse_critical_block(&item, amb)?);
            }
            "cocycle" => {
                want_args(&item, 4)?;
                let d = dga.as_ref().ok_or_else(|| err(no, "`cocycle` before `dga`"))?;
                let kind = parse_kind_tok(no, &item.head[2])?;
                let src_name = item.head[3].clone();
                let tgt_name = item.head[4].clone();
                let src = criticals
                    .get(&src_name)
                    .ok_or_else(|| err(no, format!("unknown critical basis `{src_name}`")))?;
                let tgt = criticals
                    .get(&tgt_name)
                    .ok_or_else(|| err(no, format!("unknown critical basis `{tgt_name}`")))?;
                let matrix = parse_cocycle_block(&item, kind, src, tgt, d)?;
                cocycles.insert(
                    item.head[1].clone(),
                    CocycleDecl { kind, src: src_name, tgt: tgt_name, matrix },
                );
            }
            "map" => {
                want_args(&item, 1)?;
                maps.insert(item.head[1].clone(), parse_map_block(&item)?);
            }
            "pairing" => {
                want_args(&item, 1)?;
                pairings.insert(item.head[1].clone(), parse_pairing_block(&item)?);
            }
            "coeff" => {
                let h = &item.head;
                if h.len() < 5 {
                    return Err(err(no, "`coeff` needs tag, scalars, system and cocycle"));
                }
                let ctx = parse_scalar_tok(no, &h[2])?;
                let (system, cocycle) = match h[3].as_str() {
                    "dg" if h.len() == 6 => (CoeffSystem::Dg(h[4].clone()), h[5].clone()),
                    "lifted" if h.len() == 6 => (CoeffSystem::Lifted(h[4].clone()), h[5].clone()),
                    "group-ring" if h.len() == 5 => (CoeffSystem::GroupRing, h[4].clone()),
                    other => return Err(err(no, format!("bad coefficient system `{other}`"))),
                };
                coeffs.insert(h[1].clone(), CoeffTag { ctx, system, cocycle });
            }
            "expect" => {
                expects.push(parse_expect(no, &item.head)?);
            }
            other => return Err(err(no, format!("unknown statement `{other}`"))),
        }
    }

    Ok(Bundle {
        name: name.ok_or_else(|| err(1, "missing `bundle` header"))?,
        ambient: ambient.ok_or_else(|| err(1, "missing `ambient` line"))?,
        notes,
        dga: dga.ok_or_else(|| err(1, "missing `dga` block"))?,
        modules,
        gmodules,
        criticals,
        cocycles,
        characters,
        maps,
        pairings,
        coeffs,
        expects,
    })
}

fn parse_group(line: usize, args: &[String]) -> Result<GroupSpec, Error> {
    match args[0].as_str() {
        "trivial" if args.len() == 1 => Ok(GroupSpec::Trivial),
        "free-abelian" if args.len() >= 2 => {
            Ok(GroupSpec::FreeAbelian { gens: args[1..].to_vec() })
        }
        "cyclic" if args.len() == 3 => {
            let k = parse_usize(line, &args[1])?;
            if k < 2 {
                return Err(err(line, "cyclic group order must be at least 2"));
            }
            Ok(GroupSpec::cyclic(k, &args[2]))
        }
        "klein" if args.len() == 3 => {
            Ok(GroupSpec::KleinBottle { gens: [args[1].clone(), args[2].clone()] })
        }
        other => Err(err(line, format!("bad group declaration `{other}`"))),
    }
}

fn parse_graded_lines(
    body: &[(usize, String)],
) -> Result<(GradedBasis, Vec<(usize, String)>), Error> {
    let mut gens = Vec::new();
    let mut window: Option<(i64, i64)> = None;
    let mut rest = Vec::new();
    for (no, line) in body {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "gen" if toks.len() == 3 => {
                gens.push((toks[1].to_string(), parse_i64(*no, toks[2])?));
            }
            "window" if toks.len() == 3 => {
                window = Some((parse_i64(*no, toks[1])?, parse_i64(*no, toks[2])?));
            }
            _ => rest.push((*no, line.clone())),
        }
    }
    let window = window
        .ok_or_else(|| err(body.first().map(|(n, _)| *n).unwrap_or(1), "missing `window` line"))?;
    Ok((GradedBasis { gens, window }, rest))
}

fn parse_dga_block(
    item: &Item,
    group_spec: Option<GroupSpec>,
) -> Result<DgaPresentation<ScalarLit>, Error> {
    let (basis, rest) = parse_graded_lines(&item.body)?;
    let mut unit: Option<String> = None;
    let mut has_involution = false;
    let mut proj = BTreeMap::new();
    let mut tables = Vec::new();
    for (no, line) in rest {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "unit" if toks.len() == 2 => unit = Some(toks[1].to_string()),
            "involution" if toks.len() == 1 => has_involution = true,
            "proj" => {
                let (head, value) = value_of(no, &line)?;
                if head.len() != 2 {
                    return Err(err(no, "`proj` takes one generator"));
                }
                let spec = group_spec
                    .as_ref()
                    .ok_or_else(|| err(no, "`proj` without a `group` declaration"))?;
                proj.insert(head[1].clone(), spec.parse_elt(&value).map_err(|e| {
                    err(no, format!("bad group word `{value}`: {e}"))
                })?);
            }
            _ => tables.push((no, line)),
        }
    }
    let unit = unit.ok_or_else(|| err(item.line, "dga block is missing a `unit` line"))?;
    let mut dga = DgaPresentation {
        basis,
        unit,
        mul_table: BTreeMap::new(),
        diff_table: BTreeMap::new(),
        group: group_spec.map(|spec| GroupDecl { spec, proj }),
        involution: None,
    };
    let deg = |no: usize, g: &str| {
        dga.basis
            .degree_of(g)
            .ok_or_else(|| err(no, format!("unknown algebra generator `{g}`")))
    };
    let mut mul_table = BTreeMap::new();
    let mut diff_table = BTreeMap::new();
    let mut involution: Option<BTreeMap<String, AlgebraElement<ScalarLit>>> = None;
    for (no, line) in tables {
        let (head, value) = value_of(no, &line)?;
        match head[0].as_str() {
            "mul" if head.len() == 3 => {
                let d = deg(no, &head[1])? + deg(no, &head[2])?;
                mul_table.insert(
                    (head[1].clone(), head[2].clone()),
                    parse_alg_elt(no, &dga, &value, d)?,
                );
            }
            "diff" if head.len() == 2 => {
                let d = deg(no, &head[1])? - 1;
                diff_table.insert(head[1].clone(), parse_alg_elt(no, &dga, &value, d)?);
            }
            "involution" if head.len() == 2 => {
                let d = deg(no, &head[1])?;
                involution
                    .get_or_insert_with(BTreeMap::new)
                    .insert(head[1].clone(), parse_alg_elt(no, &dga, &value, d)?);
            }
            other => return Err(err(no, format!("unknown dga line `{other}`"))),
        }
    }
    dga.mul_table = mul_table;
    dga.diff_table = diff_table;
    dga.involution = if has_involution && involution.is_none() {
        Some(BTreeMap::new())
    } else {
        involution
    };
    Ok(dga)
}

fn parse_module_block(
    item: &Item,
    dga: &DgaPresentation<ScalarLit>,
) -> Result<DgModulePresentation<ScalarLit>, Error> {
    let (basis, rest) = parse_graded_lines(&item.body)?;
    let mut sense = GradingSense::Homological;
    let mut tables = Vec::new();
    for (no, line) in rest {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "sense" if toks.len() == 2 => {
                sense = match toks[1] {
                    "homological" => GradingSense::Homological,
                    "cohomological" => GradingSense::Cohomological,
                    other => return Err(err(no, format!("unknown grading sense `{other}`"))),
                };
            }
            _ => tables.push((no, line)),
        }
    }
    let mut m = DgModulePresentation { basis, action: BTreeMap::new(), diff: BTreeMap::new(), sense };
    for (no, line) in tables {
        let (head, value) = value_of(no, &line)?;
        match head[0].as_str() {
            "act" if head.len() == 3 => {
                let md = m.basis.degree_of(&head[1]).ok_or_else(|| {
                    err(no, format!("unknown module generator `{}`", head[1]))
                })?;
                let ad = dga.basis.degree_of(&head[2]).ok_or_else(|| {
                    err(no, format!("unknown algebra generator `{}`", head[2]))
                })?;
                let e = parse_mod_elt(no, &m.basis, &value, m.acted_degree(md, ad))?;
                m.action.insert((head[1].clone(), head[2].clone()), e);
            }
            "diff" if head.len() == 2 => {
                let md = m.basis.degree_of(&head[1]).ok_or_else(|| {
                    err(no, format!("unknown module generator `{}`", head[1]))
                })?;
                let e = parse_mod_elt(no, &m.basis, &value, m.diff_degree(md))?;
                m.diff.insert(head[1].clone(), e);
            }
            other => return Err(err(no, format!("unknown module line `{other}`"))),
        }
    }
    Ok(m)
}

fn parse_gmodule_block(item: &Item) -> Result<GroupModule<ScalarLit>, Error> {
    let mut rank: Option<usize> = None;
    let mut acts = Vec::new();
    for (no, line) in &item.body {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "rank" && toks.len() == 2 {
            rank = Some(parse_usize(*no, toks[1])?);
        } else {
            acts.push((*no, line.clone()));
        }
    }
    let rank = rank.ok_or_else(|| err(item.line, "gmodule block is missing a `rank` line"))?;
    let mut action = BTreeMap::new();
    for (no, line) in acts {
        let (head, value) = value_of(no, &line)?;
        if head.len() != 2 || head[0] != "act" {
            return Err(err(no, format!("unknown gmodule line `{line}`")));
        }
        action.insert(head[1].clone(), parse_matrix(no, &value, rank)?);
    }
    Ok(GroupModule { rank, action })
}

fn parse_character_block(item: &Item) -> Result<SignCharacter, Error> {
    let mut values = BTreeMap::new();
    for (no, line) in &item.body {
        let (head, value) = value_of(*no, line)?;
        if head.len() != 2 || head[0] != "sign" {
            return Err(err(*no, format!("unknown character line `{line}`")));
        }
        let v: i8 = value
            .parse()
            .ok()
            .filter(|v| *v == 1 || *v == -1)
            .ok_or_else(|| err(*no, format!("character value must be 1 or -1, found `{value}`")))?;
        values.insert(head[1].clone(), v);
    }
    Ok(SignCharacter { values })
}

fn parse_critical_block(item: &Item, ambient: i64) -> Result<CriticalBasis, Error> {
    let mut points = Vec::new();
    for (no, line) in &item.body {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 || toks[0] != "point" {
            return Err(err(*no, format!("unknown critical line `{line}`")));
        }
        points.push((toks[1].to_string(), parse_i64(*no, toks[2])?));
    }
    Ok(CriticalBasis { points, ambient_dim: ambient })
}

fn parse_cocycle_block(
    item: &Item,
    kind: CocycleKind,
    src: &CriticalBasis,
    tgt: &CriticalBasis,
    dga: &DgaPresentation<ScalarLit>,
) -> Result<CocycleMatrix<ScalarLit>, Error> {
    let mut m = CocycleMatrix::new(kind);
    for (no, line) in &item.body {
        let (head, value) = value_of(*no, line)?;
        if head.len() != 3 || head[0] != "entry" {
            return Err(err(*no, format!("unknown cocycle line `{line}`")));
        }
        let ix = src
            .index_of(&head[1])
            .ok_or_else(|| err(*no, format!("unknown critical point `{}`", head[1])))?;
        let iy = tgt
            .index_of(&head[2])
            .ok_or_else(|| err(*no, format!("unknown critical point `{}`", head[2])))?;
        let e = parse_alg_elt(*no, dga, &value, kind.entry_degree(ix, iy))?;
        m.entries.insert((head[1].clone(), head[2].clone()), e);
    }
    Ok(m)
}

fn parse_map_block(item: &Item) -> Result<MapDecl, Error> {
    let mut kind: Option<MapKind> = None;
    let mut coeff: Option<String> = None;
    let mut src: Option<(String, String)> = None;
    let mut tgt: Option<(String, String)> = None;
    let mut nu0: Option<String> = None;
    let mut nu1: Option<String> = None;
    let mut h: Option<String> = None;
    for (no, line) in &item.body {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match (toks[0], toks.len()) {
            ("kind", 2) => {
                kind = Some(match toks[1] {
                    "continuation" => MapKind::Continuation,
                    "homotopy" => MapKind::Homotopy,
                    other => return Err(err(*no, format!("unknown map kind `{other}`"))),
                });
            }
            ("coeff", 2) => coeff = Some(toks[1].to_string()),
            ("src", 3) => src = Some((toks[1].to_string(), toks[2].to_string())),
            ("tgt", 3) => tgt = Some((toks[1].to_string(), toks[2].to_string())),
            ("nu", 2) | ("nu0", 2) => nu0 = Some(toks[1].to_string()),
            ("nu1", 2) => nu1 = Some(toks[1].to_string()),
            ("h", 2) => h = Some(toks[1].to_string()),
            _ => return Err(err(*no, format!("unknown map line `{line}`"))),
        }
    }
    let missing = |what: &str| err(item.line, format!("map block is missing `{what}`"));
    Ok(MapDecl {
        kind: kind.ok_or_else(|| missing("kind"))?,
        coeff: coeff.ok_or_else(|| missing("coeff"))?,
        src: src.ok_or_else(|| missing("src"))?,
        tgt: tgt.ok_or_else(|| missing("tgt"))?,
        nu0: nu0.ok_or_else(|| missing("nu"))?,
        nu1,
        h,
    })
}

fn parse_pairing_block(item: &Item) -> Result<PairingDecl, Error> {
    let mut ctx: Option<ScalarCtx> = None;
    let mut module: Option<String> = None;
    let mut f: Option<(String, String)> = None;
    let mut negf: Option<(String, String)> = None;
    let mut orientation: Option<String> = None;
    let mut matching = BTreeMap::new();
    for (no, line) in &item.body {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match (toks[0], toks.len()) {
            ("scalars", 2) => ctx = Some(parse_scalar_tok(*no, toks[1])?),
            ("module", 2) => module = Some(toks[1].to_string()),
            ("f", 3) => f = Some((toks[1].to_string(), toks[2].to_string())),
            ("negf", 3) => negf = Some((toks[1].to_string(), toks[2].to_string())),
            ("orientation", 2) => orientation = Some(toks[1].to_string()),
            ("match", _) => {
                let (head, value) = value_of(*no, line)?;
                if head.len() != 2 {
                    return Err(err(*no, "`match` takes one critical point"));
                }
                matching.insert(head[1].clone(), value);
            }
            _ => return Err(err(*no, format!("unknown pairing line `{line}`"))),
        }
    }
    let missing = |what: &str| err(item.line, format!("pairing block is missing `{what}`"));
    Ok(PairingDecl {
        ctx: ctx.ok_or_else(|| missing("scalars"))?,
        module: module.ok_or_else(|| missing("module"))?,
        f: f.ok_or_else(|| missing("f"))?,
        negf: negf.ok_or_else(|| missing("negf"))?,
        orientation,
        matching,
    })
}

fn parse_expect(line: usize, head: &[String]) -> Result<Expectation, Error> {
    let joined = head.join(" ");
    let (head, value) = value_of(line, &joined)?;
    match head.get(1).map(String::as_str) {
        Some("homology") if head.len() == 4 => Ok(Expectation::Homology(
            head[2].clone(),
            parse_i64(line, &head[3])?,
            value,
        )),
        Some("e2") if head.len() == 5 => Ok(Expectation::E2(
            head[2].clone(),
            parse_i64(line, &head[3])?,
            parse_i64(line, &head[4])?,
            parse_usize(line, &value)?,
        )),
        Some("d2") if head.len() == 5 => Ok(Expectation::D2(
            head[2].clone(),
            parse_i64(line, &head[3])?,
            parse_i64(line, &head[4])?,
            parse_usize(line, &value)?,
        )),
        _ => Err(err(line, format!("bad expectation `{joined}`"))),
    }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

fn render_group(spec: &GroupSpec) -> String {
    match spec {
        GroupSpec::Trivial => "group trivial".into(),
        GroupSpec::FreeAbelian { gens } => format!("group free-abelian {}", gens.join(" ")),
        GroupSpec::Finite { elements, generators, .. } => {
            assert_eq!(generators.len(), 1, "only cyclic finite groups have a text form");
            format!("group cyclic {} {}", elements.len(), elements[generators[0]])
        }
        GroupSpec::KleinBottle { gens } => format!("group klein {} {}", gens[0], gens[1]),
    }
}

pub fn render_bundle(b: &Bundle) -> String {
    let mut out = String::new();
    let mut push = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    push(format!("bundle {}", b.name));
    push(format!("ambient {}", b.ambient));
    for n in &b.notes {
        push(format!("note {n}"));
    }
    if let Some(gd) = &b.dga.group {
        push(render_group(&gd.spec));
    }

    push(String::new());
    push("dga".into());
    for (g, d) in &b.dga.basis.gens {
        push(format!("  gen {g} {d}"));
    }
    push(format!("  window {} {}", b.dga.basis.window.0, b.dga.basis.window.1));
    push(format!("  unit {}", b.dga.unit));
    if let Some(gd) = &b.dga.group {
        for (g, e) in &gd.proj {
            push(format!("  proj {g} = {}", gd.spec.render_elt(e)));
        }
    }
    for ((a, c), e) in &b.dga.mul_table {
        push(format!("  mul {a} {c} = {}", b.dga.render_elt(e)));
    }
    for (g, e) in &b.dga.diff_table {
        push(format!("  diff {g} = {}", b.dga.render_elt(e)));
    }
    if let Some(inv) = &b.dga.involution {
        if inv.is_empty() {
            push("  involution".into());
        } else {
            for (g, e) in inv {
                push(format!("  involution {g} = {}", b.dga.render_elt(e)));
            }
        }
    }
    push("end".into());

    for (name, m) in &b.modules {
        push(String::new());
        push(format!("module {name}"));
        let sense = match m.sense {
            GradingSense::Homological => "homological",
            GradingSense::Cohomological => "cohomological",
        };
        push(format!("  sense {sense}"));
        for (g, d) in &m.basis.gens {
            push(format!("  gen {g} {d}"));
        }
        push(format!("  window {} {}", m.basis.window.0, m.basis.window.1));
        for ((mg, ag), e) in &m.action {
            push(format!("  act {mg} {ag} = {}", render_mod_elt(e)));
        }
        for (mg, e) in &m.diff {
            push(format!("  diff {mg} = {}", render_mod_elt(e)));
        }
        push("end".into());
    }

    for (name, g) in &b.gmodules {
        push(String::new());
        push(format!("gmodule {name}"));
        push(format!("  rank {}", g.rank));
        for (gen, m) in &g.action {
            push(format!("  act {gen} = {}", render_matrix(m)));
        }
        push("end".into());
    }

    for (name, w) in &b.characters {
        push(String::new());
        push(format!("character {name}"));
        for (g, v) in &w.values {
            push(format!("  sign {g} = {v}"));
        }
        push("end".into());
    }

    for (name, c) in &b.criticals {
        push(String::new());
        push(format!("critical {name}"));
        for (p, d) in &c.points {
            push(format!("  point {p} {d}"));
        }
        push("end".into());
    }

    for (name, c) in &b.cocycles {
        push(String::new());
        push(format!("cocycle {name} {} {} {}", kind_tok(c.kind), c.src, c.tgt));
        for ((x, y), e) in &c.matrix.entries {
            push(format!("  entry {x} {y} = {}", b.dga.render_elt(e)));
        }
        push("end".into());
    }

    for (name, m) in &b.maps {
        push(String::new());
        push(format!("map {name}"));
        let kind = match m.kind {
            MapKind::Continuation => "continuation",
            MapKind::Homotopy => "homotopy",
        };
        push(format!("  kind {kind}"));
        push(format!("  coeff {}", m.coeff));
        push(format!("  src {} {}", m.src.0, m.src.1));
        push(format!("  tgt {} {}", m.tgt.0, m.tgt.1));
        match m.kind {
            MapKind::Continuation => push(format!("  nu {}", m.nu0)),
            MapKind::Homotopy => {
                push(format!("  nu0 {}", m.nu0));
                if let Some(nu1) = &m.nu1 {
                    push(format!("  nu1 {nu1}"));
                }
                if let Some(h) = &m.h {
                    push(format!("  h {h}"));
                }
            }
        }
        push("end".into());
    }

    for (name, p) in &b.pairings {
        push(String::new());
        push(format!("pairing {name}"));
        push(format!("  scalars {}", scalar_tok(&p.ctx)));
        push(format!("  module {}", p.module));
        push(format!("  f {} {}", p.f.0, p.f.1));
        push(format!("  negf {} {}", p.negf.0, p.negf.1));
        if let Some(w) = &p.orientation {
            push(format!("  orientation {w}"));
        }
        for (x, y) in &p.matching {
            push(format!("  match {x} = {y}"));
        }
        push("end".into());
    }

    if !b.coeffs.is_empty() {
        push(String::new());
        for (tag, c) in &b.coeffs {
            let system = match &c.system {
                CoeffSystem::Dg(m) => format!("dg {m}"),
                CoeffSystem::Lifted(g) => format!("lifted {g}"),
                CoeffSystem::GroupRing => "group-ring".into(),
            };
            push(format!("coeff {tag} {} {system} {}", scalar_tok(&c.ctx), c.cocycle));
        }
    }

    if !b.expects.is_empty() {
        push(String::new());
        for e in &b.expects {
            match e {
                Expectation::Homology(tag, deg, v) => {
                    push(format!("expect homology {tag} {deg} = {v}"));
                }
                Expectation::E2(tag, p, q, dim) => {
                    push(format!("expect e2 {tag} {p} {q} = {dim}"));
                }
                Expectation::D2(tag, p, q, rank) => {
                    push(format!("expect d2 {tag} {p} {q} = {rank}"));
                }
            }
        }
    }

    out
}
