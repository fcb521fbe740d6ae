//! Named generators: `regular:N`, `trivial:N`, `augmentation:N`,
//! `zeta-twist:P`, `permutation:N:d1,d2,...`, `random:N:RANK` (uses the seed).

use flasque::groupring::{BaseRing, CyclicGroup};
use flasque::lattice::{
    augmentation_ideal, permutation_lattice, random_lattice, regular_lattice, trivial_lattice, twisted_line,
};
use flasque::GroupLattice;

use crate::CliError;

fn count(field: &str, what: &str) -> Result<usize, CliError> {
    field.trim().parse().map_err(|_| CliError::Parse(format!("{what}: {field:?} is not a count")))
}

fn group(field: &str) -> Result<CyclicGroup, CliError> {
    CyclicGroup::new(count(field, "group order")?).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn builtin_lattice(spec: &str, seed: u64) -> Result<GroupLattice, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Parse(format!("unknown builtin {spec:?}"));
    let lattice_err = |e: flasque::LatticeError| CliError::Parse(format!("builtin {spec:?}: {e}"));
    let z = BaseRing::Integers;
    match parts.as_slice() {
        ["regular", n] => Ok(regular_lattice(z, group(n)?)),
        ["trivial", n] => Ok(trivial_lattice(z, group(n)?)),
        ["augmentation", n] => Ok(augmentation_ideal(z, group(n)?)),
        ["zeta-twist", p] => {
            // R = Z[zeta_p], C_p acting through zeta
            let g = group(p)?;
            twisted_line(BaseRing::Cyclotomic { m: g.order() }, g, 1).map_err(lattice_err)
        }
        ["permutation", n, orbits] => {
            let orbits = orbits.split(',').map(|d| count(d, "orbit size")).collect::<Result<Vec<_>, _>>()?;
            permutation_lattice(z, group(n)?, &orbits).map_err(lattice_err)
        }
        ["random", n, rank] => random_lattice(z, group(n)?, count(rank, "rank")?, seed).map_err(lattice_err),
        _ => Err(bad()),
    }
}
