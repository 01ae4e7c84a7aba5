//! Text, CSV and SVG rendering.

use qsc_core::ComplexityReport;

/// `printf("%.*g")`: `digits` significant digits, trailing zeros dropped, exponent form
/// outside `1e-4 <= |x| < 10^digits`.
pub fn fmt_g(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const CSV_HEADER: &str = "theta,fisher,entropy,entropy_power,cfs";

/// One record per report, each terminated by `\n`.
pub fn sweep_csv(reports: &[ComplexityReport]) -> String {
    let mut out = String::with_capacity(64 * (reports.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let fields = [r.theta, r.fisher, r.entropy, r.entropy_power, r.cfs];
        let row: Vec<String> = fields.iter().map(|v| fmt_g(*v, 12)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;

/// Static plot of `cfs` against `theta`.
pub fn sweep_svg(reports: &[ComplexityReport], title: &str) -> String {
    let lo = reports.iter().map(|r| r.cfs).fold(f64::INFINITY, f64::min);
    let hi = reports.iter().map(|r| r.cfs).fold(f64::NEG_INFINITY, f64::max);
    // Flat curves still get a visible vertical range.
    let pad = if hi - lo > 1e-9 * hi.abs().max(1.0) { 0.05 * (hi - lo) } else { 0.05 * hi.abs().max(1.0) };
    let (y0, y1) = (lo - pad, hi + pad);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |t: f64| LEFT + plot_w * t / std::f64::consts::PI;
    let sy = |v: f64| TOP + plot_h * (y1 - v) / (y1 - y0);

    let points: Vec<String> = reports
        .iter()
        .map(|r| format!("{:.2},{:.2}", sx(r.theta), sy(r.cfs)))
        .collect();
    let bottom = TOP + plot_h;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<line x1=\"{LEFT}\" y1=\"{bottom}\" x2=\"{}\" y2=\"{bottom}\" stroke=\"black\"/>\n",
        LEFT + plot_w
    ));
    svg.push_str(&format!("<line x1=\"{LEFT}\" y1=\"{TOP}\" x2=\"{LEFT}\" y2=\"{bottom}\" stroke=\"black\"/>\n"));
    for (t, label) in [(0.0, "0"), (std::f64::consts::FRAC_PI_2, "π/2"), (std::f64::consts::PI, "π")] {
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{label}</text>\n",
            sx(t),
            bottom + 16.0
        ));
    }
    for v in [lo, hi] {
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
            LEFT - 6.0,
            sy(v) + 4.0,
            fmt_g(v, 5)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\">θ</text>\n",
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">C_FS</text>\n",
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
        LEFT + plot_w / 2.0,
        TOP - 6.0,
        escape(title)
    ));
    svg.push_str(&format!(
        "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        points.join(" ")
    ));
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printf_g_formatting() {
        assert_eq!(fmt_g(0.0, 12), "0");
        assert_eq!(fmt_g(1.0, 12), "1");
        assert_eq!(fmt_g(5.15180212, 12), "5.15180212");
        assert_eq!(fmt_g(std::f64::consts::PI, 12), "3.14159265359");
        assert_eq!(fmt_g(-0.000123456789, 12), "-0.000123456789");
        assert_eq!(fmt_g(0.0000123, 12), "1.23e-05");
        assert_eq!(fmt_g(1234567890123.0, 12), "1.23456789012e+12");
        assert_eq!(fmt_g(137.02, 12), "137.02");
        assert_eq!(fmt_g(999999999999.9, 12), "1e+12");
    }
}
