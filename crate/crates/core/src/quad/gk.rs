//! Gauss-Kronrod pairs: 7/15 and 10/21 points.

pub(crate) struct Rule {
    pub xgk: &'static [f64],
    pub wg: &'static [f64],
    pub wgk: &'static [f64],
}

#[allow(clippy::excessive_precision)]
pub(crate) const QK15: Rule = Rule {
    xgk: &[
        0.991_455_371_120_812_639_206_854_697_526_329,
        0.949_107_912_342_758_524_526_189_684_047_851,
        0.864_864_423_359_769_072_789_712_788_640_926,
        0.741_531_185_599_394_439_863_864_773_280_788,
        0.586_087_235_467_691_130_294_144_838_258_730,
        0.405_845_151_377_397_166_906_606_412_076_961,
        0.207_784_955_007_898_467_600_689_403_773_245,
        0.0,
    ],
    wg: &[
        0.129_484_966_168_869_693_270_611_432_679_082,
        0.279_705_391_489_276_667_901_467_771_423_780,
        0.381_830_050_505_118_944_950_369_775_488_975,
        0.417_959_183_673_469_387_755_102_040_816_327,
    ],
    wgk: &[
        0.022_935_322_010_529_224_963_732_008_058_970,
        0.063_092_092_629_978_553_290_700_663_189_204,
        0.104_790_010_322_250_183_839_876_322_541_518,
        0.140_653_259_715_525_918_745_189_590_510_238,
        0.169_004_726_639_267_902_826_583_426_598_550,
        0.190_350_578_064_785_409_913_256_402_421_014,
        0.204_432_940_075_298_892_414_161_999_234_649,
        0.209_482_141_084_727_828_012_999_174_891_714,
    ],
};

#[allow(clippy::excessive_precision)]
pub(crate) const QK21: Rule = Rule {
    xgk: &[
        0.995_657_163_025_808_080_735_527_280_689_003,
        0.973_906_528_517_171_720_077_964_012_084_452,
        0.930_157_491_355_708_226_001_207_180_059_508,
        0.865_063_366_688_984_510_732_096_688_423_493,
        0.780_817_726_586_416_897_063_717_578_345_042,
        0.679_409_568_299_024_406_234_327_365_114_874,
        0.562_757_134_668_604_683_339_000_099_272_694,
        0.433_395_394_129_247_190_799_265_943_165_784,
        0.294_392_862_701_460_198_131_126_603_103_866,
        0.148_874_338_981_631_210_884_826_001_129_720,
        0.0,
    ],
    wg: &[
        0.066_671_344_308_688_137_593_568_809_893_332,
        0.149_451_349_150_580_593_145_776_339_657_697,
        0.219_086_362_515_982_043_995_534_934_228_163,
        0.269_266_719_309_996_355_091_226_921_569_469,
        0.295_524_224_714_752_870_173_892_994_651_338,
    ],
    wgk: &[
        0.011_694_638_867_371_874_278_064_396_062_192,
        0.032_558_162_307_964_727_478_818_972_459_390,
        0.054_755_896_574_351_996_031_381_300_244_580,
        0.075_039_674_810_919_952_767_043_140_916_190,
        0.093_125_454_583_697_605_535_065_465_083_366,
        0.109_387_158_802_297_641_899_210_590_325_805,
        0.123_491_976_262_065_851_077_958_109_831_074,
        0.134_709_217_311_473_325_928_054_001_771_707,
        0.142_775_938_577_060_080_797_094_273_138_717,
        0.147_739_104_901_338_491_374_841_515_972_068,
        0.149_445_554_002_916_905_664_936_468_389_821,
    ],
};

#[derive(Debug, Clone, Copy)]
pub(crate) struct QkOut {
    pub result: f64,
    pub abserr: f64,
    pub resabs: f64,
    pub resasc: f64,
}

pub(crate) fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = err.abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    err
}

pub(crate) fn qk<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rule: &Rule) -> QkOut {
    let n = rule.xgk.len();
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut fv1 = [0.0f64; 11];
    let mut fv2 = [0.0f64; 11];
    let mut res_g = if n % 2 == 0 { fc * rule.wg[n / 2 - 1] } else { 0.0 };
    let mut res_k = fc * rule.wgk[n - 1];
    let mut res_abs = res_k.abs();
    for j in 0..(n - 1) / 2 {
        let jtw = 2 * j + 1;
        let x = half * rule.xgk[jtw];
        let (f1, f2) = (f(center - x), f(center + x));
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += rule.wg[j] * (f1 + f2);
        res_k += rule.wgk[jtw] * (f1 + f2);
        res_abs += rule.wgk[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..n / 2 {
        let jtwm1 = 2 * j;
        let x = half * rule.xgk[jtwm1];
        let (f1, f2) = (f(center - x), f(center + x));
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += rule.wgk[jtwm1] * (f1 + f2);
        res_abs += rule.wgk[jtwm1] * (f1.abs() + f2.abs());
    }
    let mean = 0.5 * res_k;
    let mut res_asc = rule.wgk[n - 1] * (fc - mean).abs();
    for j in 0..n - 1 {
        res_asc += rule.wgk[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let err = (res_k - res_g) * half;
    let resabs = res_abs * half.abs();
    let resasc = res_asc * half.abs();
    QkOut { result: res_k * half, abserr: rescale_error(err, resabs, resasc), resabs, resasc }
}

/// Number of integrand evaluations per panel.
pub(crate) fn evals(rule: &Rule) -> usize {
    2 * rule.xgk.len() - 1
}

/// All abscissae on `[-1, 1]` as `(x, kronrod weight, gauss weight)`, ascending.
pub(crate) fn expand(rule: &Rule) -> Vec<(f64, f64, f64)> {
    let n = rule.xgk.len();
    let mut out = Vec::with_capacity(2 * n - 1);
    let gauss = |j: usize| -> f64 {
        if j % 2 == 1 {
            rule.wg[j / 2]
        } else if j == n - 1 && n % 2 == 0 {
            rule.wg[n / 2 - 1]
        } else {
            0.0
        }
    };
    for j in 0..n - 1 {
        out.push((-rule.xgk[j], rule.wgk[j], gauss(j)));
    }
    out.push((0.0, rule.wgk[n - 1], gauss(n - 1)));
    for j in (0..n - 1).rev() {
        out.push((rule.xgk[j], rule.wgk[j], gauss(j)));
    }
    out
}
