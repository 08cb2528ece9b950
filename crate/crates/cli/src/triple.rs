//! Parsing of multiplicity vectors and `a,c,b` triples on the command line.

use hallie_core::knit::ArQuiver;
use hallie_core::reps::MultiplicityVector;
use hallie_core::{Error, Result};

/// Resolves one summand token: an AR vertex id, or `S<v>`, `P<v>`, `I<v>`
/// for the simple, projective or injective at quiver vertex `v`.
fn resolve(ar: &ArQuiver, token: &str) -> Result<String> {
    if ar.index_of(token).is_some() {
        return Ok(token.to_string());
    }
    let q = ar.spec().quiver();
    let alias = token
        .char_indices()
        .nth(1)
        .and_then(|(i, _)| q.vertex_index(&token[i..]).map(|x| (&token[..i], x)));
    let id = match alias {
        Some(("S", x)) => Some(ar.simple_id(x)),
        Some(("P", x)) => ar.projective_id(x).map(str::to_string),
        Some(("I", x)) => ar.injective_id(x).map(str::to_string),
        _ => None,
    };
    id.ok_or_else(|| Error::InvalidInput(format!("unknown module {token:?}")))
}

fn summand(ar: &ArQuiver, item: &str, out: &mut MultiplicityVector) -> Result<()> {
    let item = item.trim();
    if item.is_empty() || item == "0" {
        return Ok(());
    }
    let (name, count) = match item.rsplit_once(':') {
        Some((name, k)) => (
            name,
            k.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidInput(format!("bad multiplicity in {item:?}")))?,
        ),
        None => (item, 1),
    };
    out.add(resolve(ar, name.trim())?, count);
    Ok(())
}

/// `id[:k]+id[:k]...`, one module.
pub fn parse_sum(ar: &ArQuiver, text: &str) -> Result<MultiplicityVector> {
    let mut out = MultiplicityVector::zero();
    for item in text.split('+') {
        summand(ar, item, &mut out)?;
    }
    Ok(out)
}

/// `id:k,id:k,...`, one module.
pub fn parse_list(ar: &ArQuiver, text: &str) -> Result<MultiplicityVector> {
    let mut out = MultiplicityVector::zero();
    for item in text.split(',') {
        summand(ar, item, &mut out)?;
    }
    Ok(out)
}

/// Either `a;c;b` with comma-separated lists, or `a,c,b` with `+`-joined sums.
pub fn parse_triple(
    ar: &ArQuiver,
    text: &str,
) -> Result<(MultiplicityVector, MultiplicityVector, MultiplicityVector)> {
    let parts: Vec<MultiplicityVector> = if text.contains(';') {
        text.split(';').map(|p| parse_list(ar, p)).collect::<Result<_>>()?
    } else {
        text.split(',').map(|p| parse_sum(ar, p)).collect::<Result<_>>()?
    };
    match <[MultiplicityVector; 3]>::try_from(parts) {
        Ok([a, c, b]) => Ok((a, c, b)),
        Err(_) => Err(Error::InvalidInput(format!(
            "a triple needs exactly three modules: {text:?}"
        ))),
    }
}
