use std::path::{Path, PathBuf};

use cstar_core::io::{read_json, write_json};
use cstar_core::matcore::{psd_check, unitarity_residual};
use cstar_core::{
    bicommutant, center, central_projections, check_deformed_algebra, check_positivizer_uniqueness,
    commutant, contains, positivizing_unitary, recover_deformation, run_all_with,
    structure_constants, AlgebraFile, DeformationFile, ElementFile, Error, InstanceSpec,
    LawContext, LawId, Result, Seed, StarAlgebra, StructureFile, ToleranceConfig,
};
use serde_json::json;

use crate::output::{print_reports, summary_table, write_report_lines, write_value};
use crate::Outcome;

pub enum Source {
    File(PathBuf),
    Blocks(Vec<usize>),
}

fn load_algebra(path: &Path, cfg: &ToleranceConfig) -> Result<StarAlgebra> {
    let file: AlgebraFile = read_json(path)?;
    file.build(cfg)
}

pub fn analyze(path: &Path, cfg: &ToleranceConfig, json_out: Option<&Path>) -> Outcome {
    let alg = load_algebra(path, cfg)?;
    let comm = commutant(&alg, cfg);
    let bicomm = bicommutant(&alg, cfg);
    let residual = alg.space().equality_residual(bicomm.space());
    let equal = residual <= cfg.tol_rel;
    let z = center(&alg, cfg);
    let projections = central_projections(&alg, cfg)?;

    println!("ambient dimension      {}", alg.ambient_dim());
    println!("algebra dimension      {}", alg.dim());
    println!("commutant dimension    {}", comm.dim());
    println!(
        "bicommutant = algebra  {} (residual {residual:.3e})",
        if equal { "yes" } else { "NO" }
    );
    println!("center dimension       {}", z.dim());
    println!("minimal central projections k = {}", projections.count());
    for (i, q) in projections.minimal.iter().enumerate() {
        println!("q{i} (rank {:.0}):\n{q}", q.trace().re);
    }
    write_value(
        json_out,
        &json!({
            "ambient_dim": alg.ambient_dim(),
            "dim": alg.dim(),
            "commutant_dim": comm.dim(),
            "bicommutant_equals_algebra": equal,
            "bicommutant_residual": residual,
            "center_dim": z.dim(),
            "k": projections.count(),
            "projections": projections.minimal,
        }),
    )?;
    Ok(equal)
}

pub fn deform(
    path: &Path,
    samples: usize,
    seed: u64,
    emit_structure: Option<&Path>,
    cfg: &ToleranceConfig,
    json_out: Option<&Path>,
) -> Outcome {
    let loaded = DeformationFile::load(path, cfg)?;
    let d = &loaded.deformed;
    if let Some(out) = emit_structure {
        let (sc, star) = structure_constants(d);
        write_json(out, &StructureFile::from_tables(&sc, &star))?;
    }
    let report = check_deformed_algebra(d, samples, Seed(seed), cfg);
    let reports = [report];
    print_reports(&reports);
    write_report_lines(json_out, &reports)?;
    Ok(reports[0].passed())
}

pub fn verify(
    source: &Source,
    seed: u64,
    cases: usize,
    inject: Option<&str>,
    cfg: &ToleranceConfig,
    json_out: Option<&Path>,
) -> Outcome {
    let alg = match source {
        Source::File(path) => load_algebra(path, cfg)?,
        Source::Blocks(blocks) => {
            InstanceSpec::new(blocks.clone(), Seed(seed), cases)?.algebra()?
        }
    };
    let ctx = LawContext::new(alg, Seed(seed), cases, *cfg)?;
    let fault = match inject {
        Some(name) => {
            let law: LawId = name.parse()?;
            Some((law, ctx.negative_control(law)))
        }
        None => None,
    };
    let reports = run_all_with(&ctx, fault);
    print_reports(&reports);
    write_report_lines(json_out, &reports)?;
    Ok(reports.iter().all(|r| r.passed()))
}

pub fn positivize(
    algebra: &Path,
    element: &Path,
    seed: u64,
    trials: usize,
    cfg: &ToleranceConfig,
    json_out: Option<&Path>,
) -> Outcome {
    let alg = load_algebra(algebra, cfg)?;
    let file: ElementFile = read_json(element)?;
    let a = file.matrix()?;
    if a.dim() != alg.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "element is {0}x{0}, algebra acts on dimension {1}",
            a.dim(),
            alg.ambient_dim()
        )));
    }
    let u = positivizing_unitary(&alg, &a, cfg)?;
    let membership = contains(&alg, &u, cfg)?;
    let modulus = u.adjoint() * &a;
    let psd = psd_check(&modulus, cfg);
    let uniqueness = check_positivizer_uniqueness(&alg, &a, trials, Seed(seed), cfg)?;

    println!("u =\n{u}");
    println!("unitarity residual       {:.3e}", unitarity_residual(&u));
    println!("membership residual      {:.3e}", membership.residual);
    println!(
        "u* a positive semidefinite {} (defect {:.3e})",
        if psd.holds { "yes" } else { "NO" },
        psd.residual
    );
    println!("{}", summary_table(std::slice::from_ref(&uniqueness)));
    write_value(
        json_out,
        &json!({
            "u": u,
            "unitarity_residual": unitarity_residual(&u),
            "membership_residual": membership.residual,
            "modulus": modulus,
            "modulus_psd": psd.holds,
            "modulus_defect": psd.residual,
            "uniqueness": uniqueness,
        }),
    )?;
    Ok(membership.holds && psd.holds && uniqueness.passed())
}

pub fn recover(
    algebra: &Path,
    structure: &Path,
    cfg: &ToleranceConfig,
    json_out: Option<&Path>,
) -> Outcome {
    let alg = load_algebra(algebra, cfg)?;
    let file: StructureFile = read_json(structure)?;
    let (sc, star) = file.to_tables()?;
    let rec = recover_deformation(&alg, &sc, &star, cfg)?;
    let residual = rec.max_residual.max(rec.star_residual);
    println!("u =\n{}", rec.u);
    println!("p selector      {:?}", rec.selector);
    println!("max residual    {:.3e}", rec.max_residual);
    println!("star residual   {:.3e}", rec.star_residual);
    write_value(
        json_out,
        &json!({
            "u": rec.u,
            "p": rec.p,
            "p_selector": rec.selector,
            "max_residual": rec.max_residual,
            "star_residual": rec.star_residual,
        }),
    )?;
    Ok(cfg.accepts(residual, 1.0))
}
