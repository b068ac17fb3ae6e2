//! Grade lists: `5`, `1,3,7`, `1..50`, or a mix such as `-1,1..10`.

use anyhow::{bail, Context, Result};

pub fn parse(spec: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let hi = hi.strip_prefix('=').unwrap_or(hi);
                let lo: i64 = lo.trim().parse().with_context(|| format!("bad grade {lo:?}"))?;
                let hi: i64 = hi.trim().parse().with_context(|| format!("bad grade {hi:?}"))?;
                if hi < lo {
                    bail!("empty grade range {part}");
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().with_context(|| format!("bad grade {part:?}"))?),
        }
    }
    if out.is_empty() {
        bail!("no grades in {spec:?}");
    }
    Ok(out)
}
