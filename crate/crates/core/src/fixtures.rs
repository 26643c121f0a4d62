//! Embedded claim-count tables and the published comparison columns.
//!
//! The observed frequencies live in `fixtures/tableN.csv` and are compiled
//! into the crate; the published fitted values are the printed ones, digit
//! for digit.

use crate::dataset::CountDataset;
use crate::error::{Error, Result};
use crate::ndoppe::CoefficientVector;

/// A published model column: fitted counts per cell, NLL and chi-square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedColumn {
    pub fitted: &'static [f64],
    pub nll: f64,
    pub chi_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixture {
    /// `table1` … `table8`.
    pub id: &'static str,
    pub csv: &'static str,
    /// NDOPPE coefficients used for this table.
    pub coeffs: &'static [f64],
    pub poisson: PublishedColumn,
    pub negbin: PublishedColumn,
    pub ndoppe: PublishedColumn,
    /// NDOPPE fitted cells left out of comparisons.
    pub excluded_ndoppe_cells: &'static [u64],
}

impl Fixture {
    pub fn dataset(&self) -> CountDataset {
        CountDataset::from_csv_str(self.csv).expect("embedded fixture parses")
    }

    pub fn coefficients(&self) -> CoefficientVector {
        CoefficientVector::new(self.coeffs.to_vec()).expect("embedded coefficients are valid")
    }
}

/// Looks up a fixture by id (`table1` … `table8`, or just the number).
pub fn fixture(id: &str) -> Result<&'static Fixture> {
    let wanted = id.trim().to_ascii_lowercase();
    FIXTURES
        .iter()
        .find(|f| f.id == wanted || f.id.strip_prefix("table") == Some(wanted.as_str()))
        .ok_or_else(|| Error::invalid("fixture", format!("unknown fixture `{id}`; expected table1..table8")))
}

pub static FIXTURES: [Fixture; 8] = [
    Fixture {
        id: "table1",
        csv: include_str!("../fixtures/table1.csv"),
        coeffs: &[1.0, 1.0],
        poisson: PublishedColumn {
            fitted: &[102627.9, 15923.36, 1235.304, 63.8884, 2.478171, 0.07690074, 0.001988605],
            nll: 55108.46,
            chi_sq: 4218.796,
        },
        negbin: PublishedColumn {
            fitted: &[103217.2, 14861.67, 1604.886, 154.0523, 13.86321, 1.197651, 0.1005918],
            nll: 54697.39,
            chi_sq: 251.3145,
        },
        ndoppe: PublishedColumn {
            fitted: &[103519.4, 14339.05, 1765.495, 203.7906, 22.58254, 2.432916, 0.2567596],
            nll: 54630.26,
            chi_sq: 57.37906,
        },
        excluded_ndoppe_cells: &[],
    },
    Fixture {
        id: "table2",
        csv: include_str!("../fixtures/table2.csv"),
        coeffs: &[1.0, 1.0, 1.0, 1.0],
        poisson: PublishedColumn {
            fitted: &[369253.7, 48637.64, 3203.244, 140.6425, 4.631312, 0.1220061],
            nll: 171373.2,
            chi_sq: 667.7778,
        },
        negbin: PublishedColumn {
            fitted: &[370786.0, 45826.83, 4247.933, 350.012, 27.03706, 2.004967],
            nll: 171152.4,
            chi_sq: 38.32639,
        },
        ndoppe: PublishedColumn {
            fitted: &[370651.6, 46250.37, 4027.637, 290.5628, 18.63986, 1.103071],
            nll: 171139.3,
            chi_sq: 14.53022,
        },
        excluded_ndoppe_cells: &[],
    },
    Fixture {
        id: "table3",
        csv: include_str!("../fixtures/table3.csv"),
        coeffs: &[1.0, 1.0],
        poisson: PublishedColumn {
            fitted: &[
                7635.46,
                1636.852,
                175.45,
                12.53737,
                0.6719245,
                0.02880876,
                0.001029313,
                3.152271e-05,
            ],
            nll: 5490.781,
            chi_sq: 48229.53,
        },
        negbin: PublishedColumn {
            fitted: &[
                7718.056,
                1494.167,
                216.9461,
                27.99961,
                3.387843,
                0.3935191,
                0.04443999,
                0.004916174,
            ],
            nll: 5388.843,
            chi_sq: 651.966,
        },
        ndoppe: PublishedColumn {
            fitted: &[
                7757.174, 1428.108, 233.7039, 35.85438, 5.280678, 0.7561408, 0.1060622, 0.01464467,
            ],
            nll: 5367.193,
            chi_sq: 248.2751,
        },
        excluded_ndoppe_cells: &[],
    },
    Fixture {
        id: "table4",
        csv: include_str!("../fixtures/table4.csv"),
        coeffs: &[1.0, 1.0],
        poisson: PublishedColumn {
            fitted: &[3668.6, 317.2765, 13.71973, 0.3955141, 0.008551448, 0.0001479133],
            nll: 1246.077,
            chi_sq: 7982.045,
        },
        negbin: PublishedColumn {
            fitted: &[3675.159, 304.7798, 18.95647, 1.048036, 0.05432081, 0.002702885],
            nll: 1221.197,
            chi_sq: 598.55,
        },
        ndoppe: PublishedColumn {
            fitted: &[3678.629, 298.3138, 21.50345, 1.453163, 0.09427396, 0.005946133],
            nll: 1213.141,
            chi_sq: 304.7557,
        },
        excluded_ndoppe_cells: &[],
    },
    Fixture {
        id: "table5",
        csv: include_str!("../fixtures/table5.csv"),
        coeffs: &[1.0, 3.35],
        poisson: PublishedColumn {
            fitted: &[96688.27, 9774.58, 494.0744, 16.64928, 0.4207845],
            nll: 36188.25,
            chi_sq: 335.9228,
        },
        negbin: PublishedColumn {
            fitted: &[96929.48, 9325.676, 672.924, 43.16177, 2.595396],
            nll: 36106.19,
            chi_sq: 18.05162,
        },
        ndoppe: PublishedColumn {
            fitted: &[96981.69, 9227.194, 711.7372, 49.85381, 3.303031],
            nll: 36104.22,
            chi_sq: 10.87023,
        },
        excluded_ndoppe_cells: &[],
    },
    Fixture {
        id: "table6",
        csv: include_str!("../fixtures/table6.csv"),
        coeffs: &[1.0, 1.0],
        poisson: PublishedColumn {
            fitted: &[
                20417.77,
                2947.815,
                212.7954,
                10.24078,
                0.3696281,
                0.01067301,
                0.0002568194,
            ],
            nll: 10297.85,
            chi_sq: 4167.816,
        },
        negbin: PublishedColumn {
            fitted: &[20522.27, 2760.887, 278.5692, 24.98418, 2.10072, 0.1695675, 0.01330708],
            nll: 10233.72,
            chi_sq: 100.8537,
        },
        ndoppe: PublishedColumn {
            fitted: &[20572.3, 2671.185, 308.2993, 33.35894, 3.46516, 0.3499451, 0.03461957],
            nll: 10224.71,
            chi_sq: 33.21162,
        },
        excluded_ndoppe_cells: &[],
    },
    Fixture {
        id: "table7",
        csv: include_str!("../fixtures/table7.csv"),
        coeffs: &[1.0, 0.01, 0.01],
        poisson: PublishedColumn {
            fitted: &[
                67424.99,
                12363.0,
                1133.436,
                69.27539,
                3.175573,
                0.1164542,
                0.003558829,
                9.322066e-05,
                2.13661e-06,
                4.352973e-08,
                7.981583e-10,
                1.330453e-11,
            ],
            nll: 44481.26,
            chi_sq: 312143246723.0,
        },
        negbin: PublishedColumn {
            fitted: &[
                67960.82,
                11415.29,
                1438.059,
                161.0327,
                16.90529,
                1.703736,
                0.1669351,
                0.01602279,
                0.001513872,
                0.0001412684,
                1.305077e-05,
                1.195703e-06,
            ],
            nll: 42392.02,
            chi_sq: 4146376.0,
        },
        ndoppe: PublishedColumn {
            fitted: &[
                68472.88,
                10556.37,
                1652.717,
                262.0185,
                41.94244,
                6.760695,
                1.09478,
                0.1777548,
                0.02889426,
                0.004696679,
                0.0007627534,
                0.0001236865,
            ],
            nll: 41257.56,
            chi_sq: 53609.78,
        },
        excluded_ndoppe_cells: &[],
    },
    // the printed NDOPPE x=4 cell repeats the x=3 value
    Fixture {
        id: "table8",
        csv: include_str!("../fixtures/table8.csv"),
        coeffs: &[1.0, 1.0],
        poisson: PublishedColumn {
            fitted: &[528917.3, 36734.96, 1275.679, 29.53329, 0.5127949],
            nll: 146704.8,
            chi_sq: 3919.575,
        },
        negbin: PublishedColumn {
            fitted: &[529526.7, 35556.89, 1790.692, 80.16146, 3.364198],
            nll: 146051.2,
            chi_sq: 826.9477,
        },
        ndoppe: PublishedColumn {
            fitted: &[529832.4, 34956.52, 2050.054, 112.713, 112.713],
            nll: 145879.5,
            chi_sq: 348.6467,
        },
        excluded_ndoppe_cells: &[4],
    },
];
