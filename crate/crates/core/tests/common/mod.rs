//! Reference values shared by the integration tests.
#![allow(dead_code)]

/// Printed reference grid: `(rows, cols, cells)` with `None` for blanks.
pub struct Golden {
    pub m: Option<usize>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub cells: Vec<Vec<Option<f64>>>,
}

fn parse(text: &str) -> Vec<Vec<Option<f64>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(',')
                .skip(1)
                .map(|c| {
                    let c = c.trim();
                    (!c.is_empty()).then(|| c.parse().expect("numeric cell"))
                })
                .collect()
        })
        .collect()
}

/// `v_k(1,n)`, rows k = 0..=9, cols n = 1..=9.
pub fn m1() -> Golden {
    Golden {
        m: Some(1),
        rows: (0..=9).collect(),
        cols: (1..=9).collect(),
        cells: parse(
            "
0,.5,.3333,.25,.2,.1667,.1429,.125,.1111,.1
1,.5,.5,.4561,.4123,.3743,.3424,.3154,.2925,.2727
2,,.1667,.25,.2902,.3089,.3162,.3173,.3149,.3105
3,,,.04387,.08774,.1237,.1519,.1735,.1902,.203
4,,,,.009785,.02446,.0406,.0565,.07139,.08499
5,,,,,.001922,.005766,.01101,.01714,.02374
6,,,,,,3.407e-4,.001192,.002575,.004434
7,,,,,,,5.541e-5,2.216e-4,5.34e-4
8,,,,,,,,8.369e-6,3.766e-5
9,,,,,,,,,1.185e-6
",
        ),
    }
}

/// `v_k(2,n)`, rows k = 0..=10, cols n = 2..=9.
pub fn m2() -> Golden {
    Golden {
        m: Some(2),
        rows: (0..=10).collect(),
        cols: (2..=9).collect(),
        cells: parse(
            "
0,.1667,.1,.06667,.04762,.03571,.02778,.02222,.01818
1,.3918,.2939,.2256,.1781,.1441,.119,.1,.08535
2,.3333,.3549,.3333,.3015,.2698,.241,.2158,.194
3,.1082,.2061,.2596,.2828,.2888,.2852,.2766,.2655
4,,.04511,.1,.1466,.1816,.2062,.2225,.2326
5,,,.01488,.03912,.06612,.09208,.1153,.1351
6,,,,.004191,.01291,.02486,.03856,.05287
7,,,,,.001049,.003728,.008072,.01382
8,,,,,,2.392e-4,9.65e-4,.002325
9,,,,,,,5.042e-5,2.281e-4
10,,,,,,,,9.943e-6
",
        ),
    }
}

/// `v_k(3,n)`, rows k = 0..=11, cols n = 3..=9.
pub fn m3() -> Golden {
    Golden {
        m: Some(3),
        rows: (0..=11).collect(),
        cols: (3..=9).collect(),
        cells: parse(
            "
0,.05,.02857,.01786,.0119,.008333,.006061,.004545
1,.187,.1247,.087,.06308,.04721,.03628,.0285
2,.3147,.2558,.2047,.1643,.1333,.1093,.09071
3,.2864,.2999,.2841,.258,.2302,.2039,.1803
4,.1353,.2039,.2419,.2574,.2586,.2516,.2402
5,.02653,.07538,.1247,.1645,.193,.2114,.222
6,,.0117,.03554,.06502,.09465,.1214,.1439
7,,,.00428,.01441,.02923,.04672,.06512
8,,,,.001365,.005137,.01152,.02013
9,,,,,3.915e-4,.001641,.004049
10,,,,,,1.029e-4,4.78e-4
11,,,,,,,2.514e-5
",
        ),
    }
}

/// `v_{m+n-1}(m,n)`, rows m = 1..=10, cols n = 2..=10.
pub fn kmax() -> Golden {
    Golden {
        m: None,
        rows: (1..=10).collect(),
        cols: (2..=10).collect(),
        cells: parse(
            "
1,.1667,.04387,.009785,.001922,3.407e-4,5.541e-5,8.369e-6,1.185e-6,1.583e-7
2,.1082,.04511,.01488,.004191,.001049,2.392e-4,5.042e-5,9.943e-6,1.85e-6
3,,.02653,.0117,.00428,.001365,3.915e-4,1.029e-4,2.514e-5,5.766e-6
4,,,.006586,.002989,.001162,4.011e-4,1.257e-4,3.636e-5,9.82e-6
5,,,,.00164,7.578e-4,3.07e-4,1.119e-4,3.737e-5,1.159e-5
6,,,,,4.091e-4,1.913e-4,7.981e-5,3.029e-5,1.061e-5
7,,,,,,1.021e-4,4.818e-5,2.055e-5,8.046e-6
8,,,,,,,2.55e-5,1.211e-5,5.256e-6
9,,,,,,,,6.369e-6,3.042e-6
10,,,,,,,,,1.591e-6
",
        ),
    }
}

impl Golden {
    /// `(k, m, n, value)` for every printed cell.
    pub fn entries(&self) -> Vec<(usize, usize, usize, f64)> {
        let mut out = Vec::new();
        for (row, cells) in self.rows.iter().zip(&self.cells) {
            for (col, cell) in self.cols.iter().zip(cells) {
                if let Some(v) = cell {
                    let (k, m) = match self.m {
                        Some(m) => (*row, m),
                        None => (row + col - 1, *row),
                    };
                    out.push((k, m, *col, *v));
                }
            }
        }
        out
    }
}

pub fn all_tables() -> Vec<(&'static str, Golden)> {
    vec![("m1", m1()), ("m2", m2()), ("m3", m3()), ("kmax", kmax())]
}
