//! Assembled per-input models: geometry (arrangement, chambers, poset,
//! shards) for any supported input, plus the algebra side (ideals and the
//! brick attached to every join-irreducible) for Dynkin types.

use crate::algebra::{AlgebraTable, Ideal};
use crate::arrangement::{rank2_chambers, weyl_chambers, Arrangement, Chamber};
use crate::coxeter::{CartanData, DynkinType, WeylGroup};
use crate::error::{Error, Result};
use crate::linalg::Rat;
use crate::poset::{Cover, RegionPoset};
use crate::rep::{ideal_quotient_rep, is_isomorphic, projective, QuiverRep};
use crate::shards::ShardSet;
use crate::stability::is_semistable;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// The integer normals used for the four-line showcase arrangement: lines
/// spaced roughly 45 degrees apart, realizing the same chamber combinatorics
/// as the evenly drawn picture.
pub fn showcase_rank2_normals() -> Vec<Vec<i64>> {
    vec![vec![-1, 2], vec![-2, 1], vec![-2, -1], vec![-1, -2]]
}

#[derive(Clone, Debug)]
pub enum ModelInput {
    Dynkin(DynkinType),
    Rank2(Vec<Vec<i64>>),
}

impl ModelInput {
    /// Accepts "A2", "D4", ..., the builtin "rank2" showcase, or an explicit
    /// normal list "nx,ny;nx,ny;...".
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("rank2") || s.eq_ignore_ascii_case("fig3") {
            return Ok(ModelInput::Rank2(showcase_rank2_normals()));
        }
        if s.contains(';') || s.contains(',') {
            let normals: Vec<Vec<i64>> = s
                .split(';')
                .map(|pair| {
                    pair.split(',')
                        .map(|x| x.trim().parse::<i64>())
                        .collect::<std::result::Result<Vec<i64>, _>>()
                        .map_err(|_| Error::InvalidRank2(format!("bad normal list: {s}")))
                })
                .collect::<Result<Vec<Vec<i64>>>>()?;
            return Ok(ModelInput::Rank2(normals));
        }
        Ok(ModelInput::Dynkin(DynkinType::parse(s)?))
    }

    pub fn label(&self) -> String {
        match self {
            ModelInput::Dynkin(t) => t.to_string(),
            ModelInput::Rank2(_) => "rank2".to_string(),
        }
    }
}

/// Geometry common to reflection and rank-2 inputs.
pub struct GeometryModel {
    pub label: String,
    pub cartan: Option<CartanData>,
    pub group: Option<WeylGroup>,
    pub arrangement: Arrangement,
    pub chambers: Vec<Chamber>,
    pub poset: RegionPoset,
    pub shard_set: ShardSet,
}

impl GeometryModel {
    pub fn build(input: &ModelInput) -> Result<Self> {
        match input {
            ModelInput::Dynkin(t) => {
                let cartan = CartanData::new(*t)?;
                let group = WeylGroup::generate(&cartan);
                let arrangement = Arrangement::reflection(&cartan);
                let chambers = weyl_chambers(&arrangement, &group)?;
                let poset = RegionPoset::build(&arrangement, &chambers)?;
                let shard_set = ShardSet::build(&arrangement, &chambers, &poset)?;
                Ok(GeometryModel {
                    label: t.to_string(),
                    cartan: Some(cartan),
                    group: Some(group),
                    arrangement,
                    chambers,
                    poset,
                    shard_set,
                })
            }
            ModelInput::Rank2(normals) => {
                let arrangement = Arrangement::rank2(normals)?;
                let chambers = rank2_chambers(&arrangement)?;
                let poset = RegionPoset::build(&arrangement, &chambers)?;
                let shard_set = ShardSet::build(&arrangement, &chambers, &poset)?;
                Ok(GeometryModel {
                    label: "rank2".to_string(),
                    cartan: None,
                    group: None,
                    arrangement,
                    chambers,
                    poset,
                    shard_set,
                })
            }
        }
    }

    /// The cover (j_*, j) of a join-irreducible chamber.
    pub fn canonical_cover(&self, ji: usize) -> Cover {
        let lower = self.poset.lower_covers[ji][0];
        *self
            .poset
            .covers
            .iter()
            .find(|c| c.lower == lower && c.upper == ji)
            .expect("canonical cover exists")
    }
}

#[derive(Clone, Debug)]
pub struct BrickEntry {
    /// Chamber (= Weyl element) index of the join-irreducible.
    pub ji: usize,
    pub cover: Cover,
    pub shard: usize,
    pub brick: QuiverRep,
    pub name: String,
}

/// A Dynkin geometry together with the preprojective algebra, all element
/// ideals, and the brick attached to each join-irreducible.
pub struct BrickModel {
    pub geometry: GeometryModel,
    pub algebra: AlgebraTable,
    /// I_w for every group element, indexed like the group.
    pub ideals: Vec<Ideal>,
    pub entries: Vec<BrickEntry>,
    pub simples: Vec<QuiverRep>,
    pub projectives: Vec<QuiverRep>,
}

impl BrickModel {
    pub fn build(dynkin: DynkinType) -> Result<Self> {
        let geometry = GeometryModel::build(&ModelInput::Dynkin(dynkin))?;
        let cartan = geometry.cartan.as_ref().unwrap();
        let group = geometry.group.as_ref().unwrap();
        let algebra = AlgebraTable::preprojective(cartan)?;

        // Ideals along the group's breadth-first order: each element extends
        // a shorter one by a single vertex ideal.
        let mut ideals: Vec<Option<Ideal>> = vec![None; group.order()];
        ideals[0] = Some(algebra.unit_ideal());
        for w in 1..group.order() {
            let word = &group.elements[w].word;
            let last = *word.last().unwrap();
            let prev = group.element_of_word(&word[..word.len() - 1]);
            let base = ideals[prev].as_ref().expect("BFS order fills prefixes first");
            ideals[w] = Some(algebra.ideal_product(base, &algebra.vertex_ideal(last)));
        }
        let ideals: Vec<Ideal> = ideals.into_iter().map(|i| i.unwrap()).collect();

        let simples: Vec<QuiverRep> =
            (0..cartan.rank()).map(|i| QuiverRep::simple(&algebra, i)).collect();
        let projectives: Vec<QuiverRep> = (0..cartan.rank())
            .map(|i| projective(&algebra, i))
            .collect::<Result<Vec<_>>>()?;

        let mut naming_rng = ChaCha8Rng::seed_from_u64(0);
        let mut entries = Vec::new();
        for (ji, _) in geometry.poset.join_irreducibles() {
            let cover = geometry.canonical_cover(ji);
            let shard = geometry
                .shard_set
                .shard_of_cover(&geometry.poset, cover)
                .expect("every cover has a shard");
            let brick = ideal_quotient_rep(&algebra, &ideals[cover.lower], &ideals[cover.upper])?;
            let name = name_brick(&algebra, &brick, &simples, &projectives, &group.elements[ji].word, &mut naming_rng);
            entries.push(BrickEntry { ji, cover, shard, brick, name });
        }
        Ok(BrickModel { geometry, algebra, ideals, entries, simples, projectives })
    }

    /// The brick label of an arbitrary cover, I_lower / I_upper.
    pub fn cover_brick(&self, cover: Cover) -> Result<QuiverRep> {
        ideal_quotient_rep(
            &self.algebra,
            &self.ideals[cover.lower],
            &self.ideals[cover.upper],
        )
    }

    pub fn entry_of_shard(&self, shard: usize) -> Option<&BrickEntry> {
        self.entries.iter().find(|e| e.shard == shard)
    }

    /// Semistable join-irreducibles at phi, computed twice: directly from
    /// King's definition, and predicted from shard closures. The two must
    /// agree; disagreement is the falsification channel for the whole build.
    pub fn semistable_bricks_at(
        &self,
        phi: &[Rat],
        primes: &[u64],
    ) -> Result<(BTreeSet<usize>, BTreeSet<usize>)> {
        let mut direct = BTreeSet::new();
        let mut predicted = BTreeSet::new();
        for e in &self.entries {
            if is_semistable(&self.algebra, &e.brick, phi, primes)? {
                direct.insert(e.ji);
            }
            if self.geometry.shard_set.shards[e.shard]
                .closure_contains(&self.geometry.arrangement, phi)
            {
                predicted.insert(e.ji);
            }
        }
        Ok((direct, predicted))
    }
}

fn name_brick(
    alg: &AlgebraTable,
    brick: &QuiverRep,
    simples: &[QuiverRep],
    projectives: &[QuiverRep],
    word: &[usize],
    rng: &mut ChaCha8Rng,
) -> String {
    for (i, s) in simples.iter().enumerate() {
        if is_isomorphic(alg, brick, s, rng) {
            return format!("S{}", i + 1);
        }
    }
    for (i, p) in projectives.iter().enumerate() {
        if is_isomorphic(alg, brick, p, rng) {
            return format!("P{}", i + 1);
        }
    }
    let word_str: String = word.iter().map(|i| (i + 1).to_string()).collect();
    format!("B({word_str})")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_model_matches_figure_two() {
        let m = BrickModel::build(DynkinType::A(2)).unwrap();
        assert_eq!(m.entries.len(), 4);
        let mut names: Vec<String> = m.entries.iter().map(|e| e.name.clone()).collect();
        names.sort();
        assert_eq!(names, vec!["P1", "P2", "S1", "S2"]);
        // shards of the two simples are whole hyperplanes, of the two
        // projectives half-lines
        for e in &m.entries {
            let shard = &m.geometry.shard_set.shards[e.shard];
            if e.name.starts_with('S') {
                assert!(shard.cuts.is_empty());
            } else {
                assert_eq!(shard.cuts.len(), 1);
            }
        }
    }

    #[test]
    fn a2_semistable_sets_at_witnesses() {
        let m = BrickModel::build(DynkinType::A(2)).unwrap();
        let primes = [2u64, 3, 5];
        for e in &m.entries {
            let witness = m.geometry.shard_set.shards[e.shard].witness.clone();
            let (direct, predicted) = m.semistable_bricks_at(&witness, &primes).unwrap();
            assert_eq!(direct, predicted);
            assert!(direct.contains(&e.ji));
        }
        // at the origin everything is semistable
        let zero = vec![crate::linalg::rat(0); 2];
        let (direct, predicted) = m.semistable_bricks_at(&zero, &primes).unwrap();
        assert_eq!(direct.len(), 4);
        assert_eq!(direct, predicted);
        // generic point: nothing
        let generic = vec![crate::linalg::rat(2), crate::linalg::rat(1)];
        let (direct, predicted) = m.semistable_bricks_at(&generic, &primes).unwrap();
        assert!(direct.is_empty());
        assert_eq!(direct, predicted);
    }

    #[test]
    fn input_parsing() {
        assert!(matches!(ModelInput::parse("A2").unwrap(), ModelInput::Dynkin(_)));
        assert!(matches!(ModelInput::parse("rank2").unwrap(), ModelInput::Rank2(_)));
        match ModelInput::parse("1,0;0,1").unwrap() {
            ModelInput::Rank2(n) => assert_eq!(n, vec![vec![1, 0], vec![0, 1]]),
            _ => panic!(),
        }
        assert!(ModelInput::parse("Z9").is_err());
    }
}
