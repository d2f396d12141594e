//! CSV of boundary rays of a fundamental domain and of its translates.

use anyhow::{bail, Result};
use klein_lattice::domain::DomainCertificate;
use std::io::Write;

pub fn emit_sectors(cert: &DomainCertificate, depth: usize, out: impl Write) -> Result<usize> {
    let rank = cert.xi.len();
    if !(2..=3).contains(&rank) {
        bail!(UnsupportedRank(rank));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["kind", "label", "word_length", "x0", "x1", "x2"])?;
    let mut rows = 0;
    let mut record = |kind: &str, label: &str, length: usize, ray: &[klein_lattice::num::Int]| -> Result<()> {
        let mut fields = vec![kind.to_string(), label.to_string(), length.to_string()];
        fields.extend(ray.iter().map(ToString::to_string));
        fields.resize(6, String::new());
        w.write_record(&fields)?;
        rows += 1;
        Ok(())
    };
    for ray in cert.domain.rays() {
        record("boundary", "id", 0, ray)?;
    }
    let ball = cert.group.ball(rank, depth);
    for e in ball.elements.iter().filter(|e| e.length > 0) {
        let label = e.word.iter().map(ToString::to_string).collect::<Vec<_>>().join(".");
        for ray in cert.domain.transform(&e.matrix).rays() {
            record("translate", &label, e.length, ray)?;
        }
    }
    w.flush()?;
    Ok(rows)
}

#[derive(Debug)]
pub struct UnsupportedRank(pub usize);

impl std::fmt::Display for UnsupportedRank {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "sector output needs ambient rank 2 or 3, got {}", self.0)
    }
}

impl std::error::Error for UnsupportedRank {}

#[cfg(test)]
mod tests {
    use super::*;
    use klein_lattice::catalog::{pell_certificate, pell_cone};
    use klein_lattice::domain::dirichlet_domain;
    use klein_lattice::isometry::GeneratedGroup;
    use klein_lattice::num::{int, rat_vec};

    fn rows(cert: &DomainCertificate, depth: usize) -> Vec<Vec<String>> {
        let mut buf = Vec::new();
        emit_sectors(cert, depth, &mut buf).unwrap();
        let mut r = csv::Reader::from_reader(buf.as_slice());
        r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
    }

    #[test]
    fn pell_domain_has_two_boundary_rays_and_translates() {
        let out = rows(&pell_certificate(20), 3);
        assert_eq!(out.iter().filter(|r| r[0] == "boundary").count(), 2);
        // Two words of each length 1..=3, two rays each.
        assert_eq!(out.iter().filter(|r| r[0] == "translate").count(), 12);
        assert!(out.iter().all(|r| r[5].is_empty()));
    }

    #[test]
    fn trivial_group_gives_the_cone_boundary_only() {
        let cert = dirichlet_domain(&GeneratedGroup::new(vec![], 5), &pell_cone(), &rat_vec(&[1, 0])).unwrap();
        let out = rows(&cert, 4);
        assert!(out.iter().all(|r| r[0] == "boundary"));
        assert_eq!(out.len(), cert.domain.rays().len());
    }

    #[test]
    fn rank_five_is_rejected() {
        let mut cert = pell_certificate(4);
        cert.xi = vec![int(1), int(0), int(0), int(0), int(0)];
        let err = emit_sectors(&cert, 1, Vec::new()).unwrap_err();
        assert!(err.downcast_ref::<UnsupportedRank>().is_some());
    }
}
