use std::fs;
use std::path::Path;

use iwexp::io::{parse_algebra_unchecked, parse_family, parse_matrix, parse_representation, parse_subalgebra, parse_vector_list};
use iwexp::oracle::Representation;
use iwexp::{builtin, span_subalgebra, AlgVector, ContractionFamily, Error, LieAlgebra, Matrix, SubalgebraSplit};

use crate::output::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

/// An existing file wins over a built-in name of the same spelling.
/// The returned algebra is not checked for the Lie axioms.
pub fn algebra_unchecked(arg: &str) -> Result<(LieAlgebra, Option<Representation>), CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok((parse_algebra_unchecked(&read(path)?)?, None));
    }
    match builtin(arg) {
        Ok(found) => Ok(found),
        Err(Error::UnknownAlgebra(_)) => Err(CliError::Io(format!(
            "{arg}: no such file and not a built-in algebra (so3, sl2, heis3, iso2, abelianN)"
        ))),
        Err(e) => Err(e.into()),
    }
}

pub fn algebra(arg: &str) -> Result<(LieAlgebra, Option<Representation>), CliError> {
    let (alg, rep) = algebra_unchecked(arg)?;
    let report = alg.validate();
    if !report.is_valid() {
        return Err(CliError::NotLie(report));
    }
    Ok((alg, rep))
}

/// A subalgebra file, or an inline literal "v1; v2".
pub fn subalgebra(alg: &LieAlgebra, arg: &str) -> Result<SubalgebraSplit, CliError> {
    let path = Path::new(arg);
    let vectors = if path.is_file() {
        parse_subalgebra(&read(path)?, alg.dim())?
    } else if arg.contains(',') || alg.dim() == 1 {
        parse_vector_list(arg, alg.dim())?
    } else {
        return Err(CliError::Io(format!("cannot read {arg}: no such file")));
    };
    Ok(span_subalgebra(alg, &vectors)?)
}

pub fn family(path: &Path) -> Result<ContractionFamily, CliError> {
    Ok(ContractionFamily::new(parse_family(&read(path)?)?)?)
}

pub fn representation(alg: &LieAlgebra, path: &Path) -> Result<Representation, CliError> {
    Ok(parse_representation(&read(path)?, alg)?)
}

/// `"v1; ...; vk; w"`: k middle entries then the coset representative.
pub fn tuple(arg: &str, dim: usize, k: usize) -> Result<(Vec<AlgVector>, AlgVector), CliError> {
    let mut vs = parse_vector_list(arg, dim)?;
    if vs.len() != k + 1 {
        return Err(Error::Parse(format!(
            "tuple {arg:?} has {} entries, order {k} needs {}",
            vs.len(),
            k + 1
        ))
        .into());
    }
    let top = vs.pop().expect("k + 1 >= 1 entries");
    Ok((vs, top))
}

pub fn square_matrix(arg: Option<&str>, dim: usize) -> Result<Matrix, CliError> {
    let Some(text) = arg else {
        return Ok(Matrix::identity(dim));
    };
    let m = parse_matrix(text)?;
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::Parse(format!(
            "matrix {text:?} is {}x{}, expected {dim}x{dim}",
            m.rows(),
            m.cols()
        ))
        .into());
    }
    Ok(m)
}
