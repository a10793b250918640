//! Synthetic data: the two-moons toy set and a KDD-shaped traffic corpus.
//!
//! The KDD generator emits raw rows in the exact 41-feature format of
//! KDDCUP99 / NSL-KDD (three categorical columns, attack-name labels with
//! trailing dots) so the whole ingestion pipeline — file parsing, grouping,
//! Table-1 stratification, encoding, normalization — can be exercised
//! end-to-end without redistributing the original data sets. Cluster
//! locations loosely follow the well-known per-attack traffic statistics
//! (neptune: SYN-flood S0 flags and high serror rates, smurf: ICMP echo
//! floods, probes: high diff-srv and rerror rates, U2R/R2L: near-normal
//! interactive sessions).

use super::{
    Dataset, FeatureSchema, Label, LabeledSample, Origin, RawDataset, RawRow, RawValue,
};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::io::Write;
use std::path::Path;

/// Two interleaving unit semicircles: the upper one centred at the origin is
/// Normal, the lower one centred at (1, 0.5) is Abnormal. Each coordinate is
/// perturbed by Gaussian noise of the given standard deviation. The label
/// split is ceil(n/2) Normal / floor(n/2) Abnormal.
pub fn make_moons(n: usize, noise: f64, seed: u64) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::Size(format!("make_moons needs n >= 2, got {n}")));
    }
    if noise < 0.0 {
        return Err(Error::Bound(format!("noise = {noise} must be >= 0")));
    }
    let n_abnormal = n / 2;
    let n_normal = n - n_abnormal;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gauss = Normal::new(0.0, noise).expect("valid std");

    let arc = |i: usize, count: usize| -> f64 {
        if count == 1 {
            0.0
        } else {
            std::f64::consts::PI * i as f64 / (count - 1) as f64
        }
    };

    let mut samples = Vec::with_capacity(n);
    for i in 0..n_normal {
        let t = arc(i, n_normal);
        let x = t.cos() + gauss.sample(&mut rng);
        let y = t.sin() + gauss.sample(&mut rng);
        samples.push(LabeledSample {
            features: vec![x, y],
            label: Label::Normal,
            category: "normal".into(),
            origin: Origin::Genuine,
        });
    }
    for i in 0..n_abnormal {
        let t = arc(i, n_abnormal);
        let x = 1.0 - t.cos() + gauss.sample(&mut rng);
        let y = 0.5 - t.sin() + gauss.sample(&mut rng);
        samples.push(LabeledSample {
            features: vec![x, y],
            label: Label::Abnormal,
            category: "abnormal".into(),
            origin: Origin::Genuine,
        });
    }
    Ok(Dataset {
        samples,
        schema: FeatureSchema::numeric(&["x", "y"]),
        provenance: format!("moons(n={n},noise={noise},seed={seed})"),
    })
}

/// Per-subtype generation profile. Numeric entries are (schema index, mean,
/// std); a negative std marks a Bernoulli feature with success probability
/// `mean`. `confusable` is the fraction of rows that blend towards normal
/// traffic (stealthy instances of the attack).
struct Profile {
    tag: &'static str,
    protocol: &'static [(&'static str, f64)],
    service: &'static [(&'static str, f64)],
    flag: &'static [(&'static str, f64)],
    numeric: &'static [(usize, f64, f64)],
    confusable: f64,
}

const NORMAL_PROFILE: Profile = Profile {
    tag: "normal.",
    protocol: &[("tcp", 0.72), ("udp", 0.23), ("icmp", 0.05)],
    service: &[
        ("http", 0.52),
        ("smtp", 0.13),
        ("domain_u", 0.12),
        ("ftp_data", 0.1),
        ("other", 0.08),
        ("telnet", 0.05),
    ],
    flag: &[("SF", 0.94), ("REJ", 0.04), ("RSTR", 0.02)],
    numeric: &[
        (0, 22.0, 40.0),    // duration
        (4, 320.0, 260.0),  // src_bytes
        (5, 2200.0, 1800.0),
        (11, 0.8, -1.0), // logged_in
        (22, 9.0, 8.0),  // count
        (23, 10.0, 9.0),
        (24, 0.03, 0.05),
        (25, 0.03, 0.05),
        (26, 0.04, 0.06),
        (27, 0.04, 0.06),
        (28, 0.9, 0.1),
        (29, 0.06, 0.07),
        (30, 0.1, 0.1),
        (31, 110.0, 70.0),
        (32, 150.0, 80.0),
        (33, 0.85, 0.15),
        (34, 0.06, 0.07),
        (35, 0.14, 0.15),
        (36, 0.05, 0.06),
        (37, 0.03, 0.05),
        (38, 0.03, 0.05),
        (39, 0.04, 0.06),
        (40, 0.04, 0.06),
    ],
    confusable: 0.0,
};

/// Busy or scanner-adjacent legitimate traffic: rejected connections, high
/// connection counts, moderate error rates. Keeps the normal class from
/// being trivially separable.
const NORMAL_NOISY_PROFILE: Profile = Profile {
    tag: "normal.",
    protocol: &[("tcp", 0.8), ("udp", 0.15), ("icmp", 0.05)],
    service: &[
        ("http", 0.4),
        ("private", 0.25),
        ("other", 0.2),
        ("telnet", 0.15),
    ],
    flag: &[("REJ", 0.45), ("SF", 0.35), ("RSTR", 0.2)],
    numeric: &[
        (0, 40.0, 60.0),
        (4, 150.0, 150.0),
        (5, 400.0, 500.0),
        (11, 0.3, -1.0),
        (22, 60.0, 40.0),
        (23, 30.0, 25.0),
        (24, 0.25, 0.2),
        (25, 0.25, 0.2),
        (26, 0.3, 0.25),
        (27, 0.3, 0.25),
        (28, 0.5, 0.25),
        (29, 0.3, 0.2),
        (30, 0.2, 0.15),
        (31, 180.0, 60.0),
        (32, 60.0, 50.0),
        (33, 0.4, 0.25),
        (34, 0.25, 0.2),
        (35, 0.3, 0.25),
        (36, 0.1, 0.1),
        (37, 0.2, 0.18),
        (38, 0.2, 0.18),
        (39, 0.25, 0.2),
        (40, 0.25, 0.2),
    ],
    confusable: 0.0,
};

const ATTACK_PROFILES: &[Profile] = &[
    Profile {
        tag: "neptune.",
        protocol: &[("tcp", 1.0)],
        service: &[("private", 0.75), ("other", 0.15), ("http", 0.1)],
        flag: &[("S0", 0.9), ("REJ", 0.06), ("RSTR", 0.04)],
        numeric: &[
            (22, 160.0, 70.0),
            (23, 12.0, 9.0),
            (24, 0.92, 0.1),
            (25, 0.92, 0.1),
            (28, 0.1, 0.08),
            (29, 0.08, 0.07),
            (31, 240.0, 25.0),
            (32, 20.0, 14.0),
            (33, 0.08, 0.07),
            (34, 0.08, 0.07),
            (37, 0.9, 0.12),
            (38, 0.9, 0.12),
        ],
        confusable: 0.22,
    },
    Profile {
        tag: "smurf.",
        protocol: &[("icmp", 1.0)],
        service: &[("ecr_i", 1.0)],
        flag: &[("SF", 1.0)],
        numeric: &[
            (4, 1032.0, 120.0),
            (22, 420.0, 90.0),
            (23, 420.0, 90.0),
            (28, 0.97, 0.05),
            (31, 250.0, 12.0),
            (32, 250.0, 12.0),
            (33, 0.97, 0.05),
            (35, 0.9, 0.1),
        ],
        confusable: 0.15,
    },
    Profile {
        tag: "back.",
        protocol: &[("tcp", 1.0)],
        service: &[("http", 1.0)],
        flag: &[("SF", 0.85), ("RSTR", 0.15)],
        numeric: &[
            (4, 10000.0, 6000.0),
            (5, 5000.0, 3000.0),
            (9, 2.0, 1.2), // hot
            (11, 0.7, -1.0),
            (22, 12.0, 8.0),
            (28, 0.9, 0.1),
            (31, 200.0, 55.0),
            (32, 190.0, 60.0),
            (33, 0.88, 0.12),
        ],
        confusable: 0.65,
    },
    Profile {
        tag: "satan.",
        protocol: &[("tcp", 0.85), ("udp", 0.15)],
        service: &[("private", 0.5), ("other", 0.3), ("telnet", 0.2)],
        flag: &[("REJ", 0.5), ("RSTR", 0.3), ("SF", 0.2)],
        numeric: &[
            (22, 15.0, 10.0),
            (23, 7.0, 5.0),
            (26, 0.6, 0.25),
            (27, 0.6, 0.25),
            (28, 0.25, 0.15),
            (29, 0.55, 0.25),
            (31, 200.0, 60.0),
            (32, 20.0, 12.0),
            (34, 0.5, 0.25),
            (39, 0.55, 0.25),
            (40, 0.55, 0.25),
        ],
        confusable: 0.55,
    },
    Profile {
        tag: "ipsweep.",
        protocol: &[("icmp", 0.85), ("tcp", 0.15)],
        service: &[("eco_i", 0.8), ("private", 0.2)],
        flag: &[("SF", 0.9), ("REJ", 0.1)],
        numeric: &[
            (4, 18.0, 10.0),
            (22, 4.0, 3.0),
            (23, 4.0, 3.0),
            (28, 0.5, 0.25),
            (29, 0.35, 0.2),
            (30, 0.6, 0.25),
            (31, 150.0, 80.0),
            (32, 10.0, 8.0),
            (34, 0.45, 0.25),
            (36, 0.55, 0.3),
        ],
        confusable: 0.4,
    },
    Profile {
        tag: "portsweep.",
        protocol: &[("tcp", 1.0)],
        service: &[("private", 0.7), ("other", 0.3)],
        flag: &[("RSTR", 0.55), ("REJ", 0.3), ("S0", 0.15)],
        numeric: &[
            (0, 900.0, 700.0),
            (22, 5.0, 4.0),
            (26, 0.55, 0.25),
            (27, 0.55, 0.25),
            (29, 0.7, 0.2),
            (31, 220.0, 40.0),
            (32, 8.0, 6.0),
            (34, 0.6, 0.25),
            (39, 0.5, 0.25),
        ],
        confusable: 0.35,
    },
    Profile {
        tag: "nmap.",
        protocol: &[("icmp", 0.5), ("tcp", 0.35), ("udp", 0.15)],
        service: &[("eco_i", 0.5), ("private", 0.4), ("domain_u", 0.1)],
        flag: &[("SF", 0.8), ("REJ", 0.2)],
        numeric: &[
            (4, 24.0, 12.0),
            (22, 3.0, 2.0),
            (28, 0.55, 0.25),
            (29, 0.4, 0.2),
            (30, 0.6, 0.25),
            (31, 120.0, 70.0),
            (32, 10.0, 8.0),
            (36, 0.6, 0.3),
        ],
        confusable: 0.5,
    },
    Profile {
        tag: "buffer_overflow.",
        protocol: &[("tcp", 1.0)],
        service: &[("telnet", 0.7), ("ftp_data", 0.3)],
        flag: &[("SF", 1.0)],
        numeric: &[
            (0, 120.0, 90.0),
            (4, 1100.0, 500.0),
            (5, 2600.0, 1200.0),
            (9, 3.0, 2.0),
            (11, 1.0, -1.0),
            (13, 0.6, -1.0), // root_shell
            (15, 2.5, 2.0),  // num_root
            (16, 1.5, 1.2),  // num_file_creations
            (22, 2.0, 1.5),
            (28, 0.85, 0.12),
            (31, 60.0, 40.0),
            (32, 20.0, 15.0),
        ],
        confusable: 0.55,
    },
    Profile {
        tag: "rootkit.",
        protocol: &[("tcp", 0.8), ("udp", 0.2)],
        service: &[("telnet", 0.5), ("ftp_data", 0.3), ("other", 0.2)],
        flag: &[("SF", 1.0)],
        numeric: &[
            (0, 100.0, 70.0),
            (4, 900.0, 400.0),
            (5, 2000.0, 900.0),
            (9, 2.5, 1.5),
            (11, 1.0, -1.0),
            (12, 1.5, 1.2), // num_compromised
            (13, 0.4, -1.0),
            (15, 1.5, 1.2),
            (17, 0.8, 0.7), // num_shells
            (22, 2.0, 1.5),
            (28, 0.85, 0.12),
            (31, 70.0, 45.0),
        ],
        confusable: 0.6,
    },
    Profile {
        tag: "loadmodule.",
        protocol: &[("tcp", 1.0)],
        service: &[("telnet", 0.8), ("other", 0.2)],
        flag: &[("SF", 1.0)],
        numeric: &[
            (0, 90.0, 60.0),
            (4, 1000.0, 400.0),
            (5, 2400.0, 1000.0),
            (9, 2.5, 1.5),
            (11, 1.0, -1.0),
            (13, 0.5, -1.0),
            (16, 1.5, 1.0),
            (22, 2.0, 1.5),
            (28, 0.85, 0.12),
        ],
        confusable: 0.6,
    },
    Profile {
        tag: "guess_passwd.",
        protocol: &[("tcp", 1.0)],
        service: &[("telnet", 0.6), ("pop_3", 0.25), ("ftp_data", 0.15)],
        flag: &[("SF", 0.6), ("RSTR", 0.4)],
        numeric: &[
            (0, 4.0, 3.0),
            (4, 120.0, 50.0),
            (5, 250.0, 100.0),
            (9, 0.8, 0.8),
            (10, 3.5, 1.5), // num_failed_logins
            (22, 3.0, 2.0),
            (26, 0.3, 0.2),
            (28, 0.8, 0.15),
            (31, 180.0, 60.0),
            (32, 30.0, 20.0),
            (39, 0.35, 0.25),
        ],
        confusable: 0.6,
    },
    Profile {
        tag: "warezclient.",
        protocol: &[("tcp", 1.0)],
        service: &[("ftp_data", 0.8), ("ftp", 0.2)],
        flag: &[("SF", 1.0)],
        numeric: &[
            (0, 250.0, 200.0),
            (4, 600.0, 400.0),
            (5, 200000.0, 150000.0),
            (9, 1.2, 1.0),
            (11, 0.7, -1.0),
            (21, 0.7, -1.0), // is_guest_login
            (22, 3.0, 2.5),
            (28, 0.88, 0.1),
            (31, 120.0, 60.0),
        ],
        confusable: 0.6,
    },
    Profile {
        tag: "ftp_write.",
        protocol: &[("tcp", 1.0)],
        service: &[("ftp", 0.6), ("ftp_data", 0.4)],
        flag: &[("SF", 1.0)],
        numeric: &[
            (0, 30.0, 25.0),
            (4, 250.0, 120.0),
            (5, 480.0, 250.0),
            (9, 0.8, 0.8),
            (11, 0.8, -1.0),
            (16, 1.0, 0.8),
            (18, 0.8, 0.7), // num_access_files
            (22, 2.0, 1.5),
            (28, 0.85, 0.12),
        ],
        confusable: 0.55,
    },
    Profile {
        tag: "imap.",
        protocol: &[("tcp", 1.0)],
        service: &[("imap4", 1.0)],
        flag: &[("SF", 0.5), ("RSTR", 0.5)],
        numeric: &[
            (0, 12.0, 8.0),
            (4, 180.0, 70.0),
            (5, 340.0, 150.0),
            (22, 2.0, 1.5),
            (26, 0.25, 0.15),
            (28, 0.8, 0.15),
            (31, 150.0, 70.0),
        ],
        confusable: 0.6,
    },
];

/// Subtypes that only appear in the testing pool.
const TEST_ONLY_PROFILES: &[Profile] = &[
    Profile {
        tag: "apache2.",
        protocol: &[("tcp", 1.0)],
        service: &[("http", 1.0)],
        flag: &[("SF", 0.85), ("RSTR", 0.15)],
        numeric: &[
            (4, 20000.0, 8000.0),
            (5, 4000.0, 1800.0),
            (9, 1.5, 1.0),
            (22, 40.0, 20.0),
            (28, 0.9, 0.08),
            (31, 230.0, 25.0),
            (32, 200.0, 45.0),
            (33, 0.88, 0.1),
        ],
        confusable: 0.3,
    },
    Profile {
        tag: "mscan.",
        protocol: &[("tcp", 0.7), ("icmp", 0.3)],
        service: &[("private", 0.6), ("eco_i", 0.4)],
        flag: &[("REJ", 0.6), ("SF", 0.4)],
        numeric: &[
            (22, 9.0, 6.0),
            (26, 0.6, 0.2),
            (27, 0.6, 0.2),
            (29, 0.65, 0.2),
            (31, 230.0, 30.0),
            (34, 0.55, 0.22),
            (39, 0.55, 0.22),
        ],
        confusable: 0.25,
    },
    Profile {
        tag: "ps.",
        protocol: &[("tcp", 1.0)],
        service: &[("telnet", 1.0)],
        flag: &[("SF", 1.0)],
        numeric: &[
            (0, 110.0, 70.0),
            (4, 1100.0, 450.0),
            (5, 2700.0, 1200.0),
            (9, 3.0, 1.8),
            (11, 1.0, -1.0),
            (13, 0.5, -1.0),
            (16, 1.8, 1.2),
            (28, 0.85, 0.12),
        ],
        confusable: 0.55,
    },
    Profile {
        tag: "snmpguess.",
        protocol: &[("udp", 1.0)],
        service: &[("snmp", 1.0)],
        flag: &[("SF", 1.0)],
        numeric: &[
            (0, 2.0, 1.5),
            (4, 105.0, 25.0),
            (5, 105.0, 25.0),
            (10, 2.5, 1.5),
            (22, 5.0, 3.0),
            (28, 0.8, 0.12),
            (31, 200.0, 55.0),
        ],
        confusable: 0.45,
    },
];

fn feature_cap(idx: usize) -> f64 {
    match idx {
        24..=30 | 33..=40 => 1.0,
        22 | 23 => 511.0,
        31 | 32 => 255.0,
        _ => f64::INFINITY,
    }
}

fn is_integer_feature(idx: usize) -> bool {
    matches!(
        idx,
        0 | 4 | 5 | 9 | 10 | 12 | 15 | 16 | 17 | 18 | 22 | 23 | 31 | 32
    )
}

fn pick_weighted(rng: &mut ChaCha8Rng, table: &[(&'static str, f64)]) -> &'static str {
    let total: f64 = table.iter().map(|(_, w)| w).sum();
    let mut x = rng.gen::<f64>() * total;
    for (name, w) in table {
        if x < *w {
            return name;
        }
        x -= w;
    }
    table.last().unwrap().0
}

fn normal_level(idx: usize) -> f64 {
    NORMAL_PROFILE
        .numeric
        .iter()
        .find(|(i, _, _)| *i == idx)
        .map(|(_, m, _)| *m)
        .unwrap_or(0.0)
}

fn gen_row(rng: &mut ChaCha8Rng, p: &Profile, drift: f64) -> RawRow {
    let confused = p.confusable > 0.0 && rng.gen::<f64>() < p.confusable;
    let mut values = vec![RawValue::Num(0.0); 41];
    values[1] = RawValue::Cat(pick_weighted(rng, p.protocol).to_string());
    let mut service = pick_weighted(rng, p.service);
    let mut flag = pick_weighted(rng, p.flag);
    if confused {
        if rng.gen::<f64>() < 0.5 {
            service = pick_weighted(rng, NORMAL_PROFILE.service);
        }
        if rng.gen::<f64>() < 0.5 {
            flag = pick_weighted(rng, NORMAL_PROFILE.flag);
        }
    }
    values[2] = RawValue::Cat(service.to_string());
    values[3] = RawValue::Cat(flag.to_string());
    for &(idx, mean, std) in p.numeric {
        let v = if std < 0.0 {
            // Bernoulli feature.
            let prob = if confused { (mean + 0.8) / 2.0 } else { mean };
            if rng.gen::<f64>() < prob {
                1.0
            } else {
                0.0
            }
        } else {
            let g = Normal::new(mean * drift, std * (1.0 + (drift - 1.0).abs()))
                .expect("valid std");
            let mut v = g.sample(rng);
            if confused {
                // Blend towards ordinary traffic levels.
                let u = 0.1 + rng.gen::<f64>() * 0.5;
                let nv = normal_level(idx);
                v = nv + (v - nv) * u;
            }
            v = v.max(0.0).min(feature_cap(idx));
            if is_integer_feature(idx) {
                v = v.round();
            }
            v
        };
        values[idx] = RawValue::Num(v);
    }
    RawRow {
        values,
        category: p.tag.to_string(),
        label: None,
    }
}

/// Size and seed knobs for the synthetic KDD corpus.
#[derive(Debug, Clone, Copy)]
pub struct SynthKddConfig {
    pub seed: u64,
    /// Multiplier on the default pool sizes (1.0 gives a training pool large
    /// enough for the Table-1 quotas: 5000/1400/8000/80/1000 per group).
    pub scale: f64,
}

impl Default for SynthKddConfig {
    fn default() -> Self {
        SynthKddConfig {
            seed: 20090827,
            scale: 1.0,
        }
    }
}

fn scaled(n: usize, scale: f64) -> usize {
    ((n as f64 * scale).round() as usize).max(2)
}

/// Generates (training pool, testing pool) of raw KDD-format rows. The
/// testing pool is drawn with drifted means and includes attack subtypes and
/// service values absent from the training pool.
pub fn synth_kdd_pool(cfg: &SynthKddConfig) -> (RawDataset, RawDataset) {
    let schema = FeatureSchema::kdd41();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let s = cfg.scale;

    let train_plan: &[(&Profile, usize)] = &[
        (&NORMAL_PROFILE, scaled(4200, s)),
        (&NORMAL_NOISY_PROFILE, scaled(800, s)),
        (&ATTACK_PROFILES[0], scaled(3200, s)), // neptune
        (&ATTACK_PROFILES[1], scaled(2200, s)), // smurf
        (&ATTACK_PROFILES[2], scaled(2600, s)), // back
        (&ATTACK_PROFILES[3], scaled(500, s)),  // satan
        (&ATTACK_PROFILES[4], scaled(400, s)),  // ipsweep
        (&ATTACK_PROFILES[5], scaled(300, s)),  // portsweep
        (&ATTACK_PROFILES[6], scaled(200, s)),  // nmap
        (&ATTACK_PROFILES[7], scaled(40, s)),   // buffer_overflow
        (&ATTACK_PROFILES[8], scaled(25, s)),   // rootkit
        (&ATTACK_PROFILES[9], scaled(15, s)),   // loadmodule
        (&ATTACK_PROFILES[10], scaled(500, s)), // guess_passwd
        (&ATTACK_PROFILES[11], scaled(350, s)), // warezclient
        (&ATTACK_PROFILES[12], scaled(80, s)),  // ftp_write
        (&ATTACK_PROFILES[13], scaled(70, s)),  // imap
    ];
    let mut train_rows = Vec::new();
    for (profile, count) in train_plan {
        for _ in 0..*count {
            train_rows.push(gen_row(&mut rng, profile, 1.0));
        }
    }

    let test_plan: &[(&Profile, usize, f64)] = &[
        (&NORMAL_PROFILE, scaled(1700, s), 0.92),
        (&NORMAL_NOISY_PROFILE, scaled(300, s), 1.05),
        (&ATTACK_PROFILES[0], scaled(700, s), 1.12), // neptune
        (&ATTACK_PROFILES[1], scaled(450, s), 1.08), // smurf
        (&ATTACK_PROFILES[2], scaled(250, s), 1.1),  // back
        (&TEST_ONLY_PROFILES[0], scaled(100, s), 1.0), // apache2
        (&ATTACK_PROFILES[3], scaled(150, s), 1.15), // satan
        (&TEST_ONLY_PROFILES[1], scaled(100, s), 1.0), // mscan
        (&ATTACK_PROFILES[6], scaled(50, s), 1.1),   // nmap
        (&ATTACK_PROFILES[7], scaled(15, s), 1.1),   // buffer_overflow
        (&TEST_ONLY_PROFILES[2], scaled(10, s), 1.0), // ps
        (&ATTACK_PROFILES[10], scaled(120, s), 1.15), // guess_passwd
        (&TEST_ONLY_PROFILES[3], scaled(80, s), 1.0), // snmpguess
    ];
    let mut test_rows = Vec::new();
    for (profile, count, drift) in test_plan {
        for _ in 0..*count {
            test_rows.push(gen_row(&mut rng, profile, *drift));
        }
    }

    (
        RawDataset {
            rows: train_rows,
            schema: schema.clone(),
            provenance: format!("synth-kdd-train(seed={},scale={s})", cfg.seed),
        },
        RawDataset {
            rows: test_rows,
            schema,
            provenance: format!("synth-kdd-test(seed={},scale={s})", cfg.seed),
        },
    )
}

/// Writes raw rows in KDD file format (features comma-separated, label tag
/// last, no header).
pub fn write_kdd_csv(dataset: &RawDataset, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?,
    );
    for row in &dataset.rows {
        let mut line = String::new();
        for v in &row.values {
            match v {
                RawValue::Num(x) => line.push_str(&format!("{x},")),
                RawValue::Cat(c) => {
                    line.push_str(c);
                    line.push(',');
                }
            }
        }
        line.push_str(&row.category);
        writeln!(out, "{line}").map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    Ok(())
}
