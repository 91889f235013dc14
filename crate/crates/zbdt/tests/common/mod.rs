//! Published lattice and option tables for the six reference dates.

#![allow(dead_code)]

pub struct Scenario {
    pub name: &'static str,
    pub date: (i32, u32, u32),
    /// BDT short rates in percent, level by level.
    pub bdt_rates: &'static [&'static [f64]],
    /// Five-year bond prices on the BDT lattice.
    pub bdt_bonds: &'static [&'static [f64]],
    pub zbdt_rates: &'static [&'static [f64]],
    pub zbdt_bonds: &'static [&'static [f64]],
    /// Zero-rate rail prices of the five-year bond at levels 1 to 4.
    pub rail: &'static [f64],
    /// strike, BDT price, BDT vol, ZBDT price, ZBDT vol
    pub options: &'static [[f64; 5]],
}

pub const SCENARIOS: [Scenario; 6] = [
    Scenario {
        name: "may_2003",
        date: (2003, 5, 23),
        bdt_rates: &[
            &[1.36],
            &[1.54, 3.76],
            &[1.87, 3.5, 6.52],
            &[2.13, 3.36, 5.3, 8.34],
            &[2.29, 3.26, 4.62, 6.56, 9.32],
        ],
        bdt_bonds: &[
            &[84.53],
            &[89.05, 82.3],
            &[92.44, 88.42, 82.36],
            &[95.27, 93.08, 89.95, 85.52],
            &[97.76, 96.85, 95.58, 93.84, 91.47],
        ],
        zbdt_rates: &[
            &[1.36],
            &[1.13, 4.21],
            &[0.97, 2.92, 8.91],
            &[0.8, 2.09, 5.51, 14.57],
            &[0.63, 1.52, 3.65, 8.81, 21.24],
        ],
        zbdt_bonds: &[
            &[84.53],
            &[91.81, 79.49],
            &[95.9, 89.76, 75.92],
            &[98.16, 95.5, 89.27, 76.1],
            &[99.37, 98.51, 96.48, 91.9, 82.48],
        ],
        rail: &[98.76, 99.17, 99.48, 99.75],
        options: &[
            [80.0, 7.6328, 1.5372, 8.5965, 1.5691],
            [81.0, 6.6716, 1.5058, 7.8715, 1.5479],
            [82.0, 5.7103, 1.4714, 7.1465, 1.5254],
            [83.0, 4.9003, 1.4399, 6.4214, 1.5014],
            [84.0, 4.1768, 1.409, 5.6964, 1.4757],
            [85.0, 3.4533, 1.3744, 4.9714, 1.4477],
            [86.0, 2.7298, 1.3343, 4.2463, 1.417],
            [87.0, 2.0063, 1.2862, 3.5213, 1.3826],
            [88.0, 1.2827, 1.2236, 2.7963, 1.343],
            [89.0, 0.8363, 1.1714, 2.0713, 1.2955],
            [90.0, 0.5934, 1.1343, 1.4609, 1.2458],
            [91.0, 0.3505, 1.0825, 1.215, 1.2226],
            [92.0, 0.1076, 0.9855, 0.9691, 1.1955],
            [93.0, 0.0, 0.0, 0.7235, 1.1624],
            [94.0, 0.0, 0.0, 0.4774, 1.119],
            [95.0, 0.0, 0.0, 0.2315, 1.0522],
            [96.0, 0.0, 0.0, 0.009, 0.8459],
            [97.0, 0.0, 0.0, 0.0062, 0.83],
            [98.0, 0.0, 0.0, 0.0033, 0.8049],
            [99.0, 0.0, 0.0, 0.0005, 0.7364],
        ],
    },
    Scenario {
        name: "aug_2006",
        date: (2006, 8, 7),
        bdt_rates: &[
            &[4.97],
            &[3.96, 5.66],
            &[3.57, 4.77, 6.37],
            &[3.3, 4.26, 5.51, 7.12],
            &[2.83, 3.71, 4.88, 6.4, 8.41],
        ],
        bdt_bonds: &[
            &[78.66],
            &[84.82, 80.33],
            &[89.65, 86.71, 83.04],
            &[93.74, 91.96, 89.72, 86.92],
            &[97.25, 96.42, 95.35, 93.98, 92.24],
        ],
        zbdt_rates: &[
            &[4.97],
            &[3.0, 6.7],
            &[2.13, 4.32, 9.06],
            &[1.54, 3.02, 6.08, 12.23],
            &[0.98, 2.0, 4.14, 8.58, 17.79],
        ],
        zbdt_bonds: &[
            &[78.66],
            &[88.02, 77.06],
            &[93.63, 87.65, 76.8],
            &[97.04, 94.19, 88.67, 78.86],
            &[99.03, 98.04, 96.02, 92.09, 84.89],
        ],
        rail: &[98.58, 99.1, 99.47, 99.75],
        options: &[
            [80.0, 5.945, 1.496, 6.6568, 1.5239],
            [81.0, 5.0361, 1.46, 5.9706, 1.4995],
            [82.0, 4.1271, 1.4196, 5.2844, 1.4734],
            [83.0, 3.2181, 1.3731, 4.5982, 1.4449],
            [84.0, 2.5267, 1.332, 3.912, 1.4135],
            [85.0, 1.8431, 1.2828, 3.2258, 1.3782],
            [86.0, 1.1595, 1.2184, 2.5396, 1.3374],
            [87.0, 0.6079, 1.1417, 1.8534, 1.2881],
            [88.0, 0.3788, 1.094, 1.3277, 1.2412],
            [89.0, 0.1497, 1.0135, 1.0945, 1.2171],
            [90.0, 0.0, 0.0, 0.8614, 1.1887],
            [91.0, 0.0, 0.0, 0.6283, 1.1535],
            [92.0, 0.0, 0.0, 0.3951, 1.1061],
            [93.0, 0.0, 0.0, 0.162, 1.0272],
            [94.0, 0.0, 0.0, 0.0139, 0.8702],
            [95.0, 0.0, 0.0, 0.0111, 0.8607],
            [96.0, 0.0, 0.0, 0.0085, 0.8487],
            [97.0, 0.0, 0.0, 0.0057, 0.8322],
            [98.0, 0.0, 0.0, 0.003, 0.8059],
            [99.0, 0.0, 0.0, 0.0003, 0.7224],
        ],
    },
    Scenario {
        name: "nov_2007",
        date: (2007, 11, 14),
        bdt_rates: &[
            &[3.56],
            &[3.06, 4.73],
            &[2.95, 4.23, 6.06],
            &[2.91, 3.91, 5.24, 7.03],
            &[2.77, 3.6, 4.68, 6.08, 7.91],
        ],
        bdt_bonds: &[
            &[81.22],
            &[86.46, 81.77],
            &[90.62, 87.59, 83.68],
            &[94.17, 92.42, 90.17, 87.33],
            &[97.31, 96.53, 95.53, 94.27, 92.67],
        ],
        zbdt_rates: &[
            &[3.56],
            &[2.26, 5.58],
            &[1.68, 3.75, 8.62],
            &[1.29, 2.69, 5.72, 12.18],
            &[0.95, 1.92, 3.97, 8.18, 16.86],
        ],
        zbdt_bonds: &[
            &[81.22],
            &[89.48, 78.69],
            &[94.39, 88.58, 77.59],
            &[97.33, 94.6, 89.21, 79.34],
            &[99.06, 98.11, 96.19, 92.44, 85.57],
        ],
        rail: &[98.63, 99.11, 99.47, 99.75],
        options: &[
            [80.0, 6.8635, 1.5215, 7.4143, 1.5414],
            [81.0, 5.934, 1.4884, 6.7131, 1.5185],
            [82.0, 5.0046, 1.4519, 6.0118, 1.494],
            [83.0, 4.0751, 1.411, 5.3105, 1.4677],
            [84.0, 3.2198, 1.3676, 4.6092, 1.439],
            [85.0, 2.5208, 1.3265, 3.9079, 1.4073],
            [86.0, 1.8218, 1.2765, 3.2066, 1.3715],
            [87.0, 1.1229, 1.2103, 2.5053, 1.33],
            [88.0, 0.6141, 1.1396, 1.8041, 1.2794],
            [89.0, 0.3799, 1.0014, 1.2969, 1.2339],
            [90.0, 0.1456, 1.009, 1.0589, 1.2089],
            [91.0, 0.0, 0.0, 0.8209, 1.1792],
            [92.0, 0.0, 0.0, 0.5829, 1.1419],
            [93.0, 0.0, 0.0, 0.3449, 1.0897],
            [94.0, 0.0, 0.0, 0.1069, 0.9926],
            [95.0, 0.0, 0.0, 0.0114, 0.8587],
            [96.0, 0.0, 0.0, 0.0086, 0.8467],
            [97.0, 0.0, 0.0, 0.0059, 0.8304],
            [98.0, 0.0, 0.0, 0.0031, 0.8044],
            [99.0, 0.0, 0.0, 0.0003, 0.7252],
        ],
    },
    Scenario {
        name: "aug_2008",
        date: (2008, 8, 8),
        bdt_rates: &[
            &[2.47],
            &[1.86, 5.43],
            &[1.85, 3.84, 8.04],
            &[1.94, 3.32, 5.67, 9.7],
            &[1.98, 3.03, 4.64, 7.1, 10.87],
        ],
        bdt_bonds: &[
            &[82.16],
            &[88.7, 79.69],
            &[92.76, 87.93, 80.1],
            &[95.7, 93.22, 89.4, 83.67],
            &[98.06, 97.06, 95.57, 93.37, 90.2],
        ],
        zbdt_rates: &[
            &[2.47],
            &[1.4, 5.95],
            &[0.95, 3.17, 10.72],
            &[0.69, 2.0, 5.8, 16.84],
            &[0.49, 1.39, 3.51, 9.42, 25.29],
        ],
        zbdt_bonds: &[
            &[82.16],
            &[91.56, 76.77],
            &[96.18, 89.46, 73.21],
            &[98.43, 95.75, 88.85, 73.27],
            &[99.51, 98.71, 96.61, 91.39, 79.82],
        ],
        rail: &[98.79, 99.19, 99.49, 99.75],
        options: &[
            [80.0, 6.8145, 1.5171, 8.3751, 1.5714],
            [81.0, 6.0812, 1.4919, 7.6631, 1.55],
            [82.0, 5.3708, 1.4655, 6.9511, 1.5272],
            [83.0, 4.6603, 1.4369, 6.2391, 1.503],
            [84.0, 3.9499, 1.4051, 5.5271, 1.4769],
            [85.0, 3.2395, 1.3693, 4.8151, 1.4486],
            [86.0, 2.5291, 1.3277, 4.1031, 1.4175],
            [87.0, 1.8187, 1.277, 3.3911, 1.3825],
            [88.0, 1.1398, 1.2132, 2.6791, 1.3421],
            [89.0, 0.9003, 1.1853, 1.967, 1.2935],
            [90.0, 0.6608, 1.1508, 1.5078, 1.2558],
            [91.0, 0.4213, 1.1048, 1.2653, 1.2334],
            [92.0, 0.1818, 1.0299, 1.0227, 1.2074],
            [93.0, 0.0, 0.0, 0.7802, 1.176],
            [94.0, 0.0, 0.0, 0.5376, 1.1359],
            [95.0, 0.0, 0.0, 0.2951, 1.078],
            [96.0, 0.0, 0.0, 0.0525, 0.9463],
            [97.0, 0.0, 0.0, 0.0062, 0.8323],
            [98.0, 0.0, 0.0, 0.0033, 0.8075],
            [99.0, 0.0, 0.0, 0.0005, 0.7417],
        ],
    },
    Scenario {
        name: "aug_2010",
        date: (2010, 8, 3),
        bdt_rates: &[
            &[0.51],
            &[1.13, 2.89],
            &[1.5, 2.98, 5.9],
            &[1.75, 2.91, 4.84, 8.04],
            &[1.79, 2.72, 4.15, 6.33, 9.65],
        ],
        bdt_bonds: &[
            &[86.87],
            &[90.6, 84.02],
            &[93.62, 89.63, 83.27],
            &[96.12, 93.95, 90.65, 85.73],
            &[98.24, 97.35, 96.01, 94.05, 91.2],
        ],
        zbdt_rates: &[
            &[0.51],
            &[0.84, 3.27],
            &[0.77, 2.46, 7.92],
            &[0.64, 1.77, 4.93, 13.76],
            &[0.47, 1.21, 3.15, 8.22, 21.45],
        ],
        zbdt_bonds: &[
            &[86.87],
            &[93.03, 81.55],
            &[96.62, 90.96, 77.38],
            &[98.54, 96.17, 90.22, 76.8],
            &[99.54, 98.81, 96.94, 92.4, 82.34],
        ],
        rail: &[98.82, 99.2, 99.49, 99.75],
        options: &[
            [80.0, 8.8374, 1.5667, 9.4675, 1.5859],
            [81.0, 7.862, 1.5378, 8.7327, 1.5659],
            [82.0, 6.8866, 1.5067, 7.9978, 1.5448],
            [83.0, 5.9112, 1.473, 7.2629, 1.5225],
            [84.0, 5.1113, 1.443, 6.528, 1.4987],
            [85.0, 4.3777, 1.4128, 5.7931, 1.4731],
            [86.0, 3.644, 1.3791, 5.0582, 1.4454],
            [87.0, 2.9104, 1.3405, 4.3233, 1.4149],
            [88.0, 2.1767, 1.2945, 3.5884, 1.3808],
            [89.0, 1.4431, 1.2358, 2.8535, 1.3415],
            [90.0, 0.8912, 1.1755, 2.1186, 1.2945],
            [91.0, 0.6453, 1.1402, 1.4042, 1.2362],
            [92.0, 0.3993, 1.0922, 1.1555, 1.2121],
            [93.0, 0.1533, 1.0101, 0.9068, 1.1836],
            [94.0, 0.0, 0.0, 0.6581, 1.1483],
            [95.0, 0.0, 0.0, 0.4095, 1.1003],
            [96.0, 0.0, 0.0, 0.1608, 1.0191],
            [97.0, 0.0, 0.0, 0.0063, 0.8279],
            [98.0, 0.0, 0.0, 0.0034, 0.8033],
            [99.0, 0.0, 0.0, 0.0006, 0.7389],
        ],
    },
    Scenario {
        name: "may_2015",
        date: (2015, 5, 20),
        bdt_rates: &[
            &[0.61],
            &[0.92, 2.97],
            &[1.04, 2.35, 5.34],
            &[1.21, 2.13, 3.72, 6.52],
            &[1.17, 1.87, 2.99, 4.78, 7.63],
        ],
        bdt_bonds: &[
            &[89.14],
            &[92.9, 86.46],
            &[95.47, 92.04, 86.02],
            &[97.32, 95.6, 92.81, 88.41],
            &[98.84, 98.17, 97.1, 95.44, 92.91],
        ],
        zbdt_rates: &[
            &[0.61],
            &[0.7, 3.21],
            &[0.53, 1.91, 6.91],
            &[0.42, 1.24, 3.7, 11.02],
            &[0.28, 0.78, 2.17, 6.01, 16.66],
        ],
        zbdt_bonds: &[
            &[89.14],
            &[94.8, 84.53],
            &[97.68, 93.22, 81.26],
            &[99.06, 97.34, 92.67, 81.09],
            &[99.72, 99.22, 97.88, 94.33, 85.72],
        ],
        rail: &[98.91, 99.23, 99.5, 99.75],
        options: &[
            [80.0, 11.1312, 1.6207, 11.1312, 1.6207],
            [81.0, 10.1562, 1.5959, 10.1562, 1.5959],
            [82.0, 9.1811, 1.5697, 9.3581, 1.575],
            [83.0, 8.2061, 1.5419, 8.6233, 1.5551],
            [84.0, 7.231, 1.512, 7.8886, 1.5341],
            [85.0, 6.256, 1.4796, 7.1538, 1.5118],
            [86.0, 5.2809, 1.4439, 6.419, 1.488],
            [87.0, 4.5431, 1.4146, 5.6842, 1.4625],
            [88.0, 3.8094, 1.3821, 4.9494, 1.4347],
            [89.0, 3.0756, 1.345, 4.2417, 1.404],
            [90.0, 2.3419, 1.3013, 3.4799, 1.3695],
            [91.0, 1.6081, 1.2467, 2.7451, 1.3297],
            [92.0, 0.8744, 1.1694, 2.0103, 1.2818],
            [93.0, 0.6085, 1.1302, 1.2756, 1.2188],
            [94.0, 0.3623, 1.0795, 0.9197, 1.1793],
            [95.0, 0.1161, 0.986, 0.671, 1.1447],
            [96.0, 0.0, 0.0, 0.4222, 1.0981],
            [97.0, 0.0, 0.0, 0.1734, 1.0205],
            [98.0, 0.0, 0.0, 0.0035, 0.7996],
            [99.0, 0.0, 0.0, 0.0007, 0.7397],
        ],
    },
];

use zbdt::model::{extract_market_view, BdtLattice, BetaTarget, CalibrationInput, Layer};

pub fn pct(rows: &[&[f64]]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| r.iter().map(|x| x / 100.0).collect()).collect()
}

impl Scenario {
    pub fn published_bdt(&self) -> BdtLattice {
        BdtLattice::new(pct(self.bdt_rates)).unwrap()
    }

    /// Market view read off the published BDT grid.
    pub fn derived_input(&self) -> CalibrationInput {
        extract_market_view(&self.published_bdt(), BetaTarget::StdDev).unwrap()
    }
}

/// Largest absolute difference between model rates (decimal) and a
/// published grid (percent), in percentage points.
pub fn rate_gap_pp(model: &[Vec<f64>], published: &[&[f64]]) -> f64 {
    model
        .iter()
        .zip(published)
        .flat_map(|(m, p)| m.iter().zip(p.iter()).map(|(a, b)| (100.0 * a - b).abs()))
        .fold(0.0, f64::max)
}

pub fn bond_gap(model: &[Layer], published: &[&[f64]]) -> f64 {
    model
        .iter()
        .zip(published)
        .flat_map(|(m, p)| m.nodes.iter().zip(p.iter()).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max)
}

/// Largest gap between the model rail prices at levels 1.. and `published`.
pub fn rail_gap(model: &[Layer], published: &[f64]) -> f64 {
    model[1..].iter().zip(published).map(|(m, p)| m.rail.map_or(f64::INFINITY, |r| (r - p).abs())).fold(0.0, f64::max)
}
