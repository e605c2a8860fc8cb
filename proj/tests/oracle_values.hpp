// Frozen reference values generated by tools/gen_oracles.py (mpmath).
// Regenerate with: python3 tools/gen_oracles.py > tests/oracle_values.hpp
#pragma once

namespace oracle {

inline constexpr double daub2_taps[] = {0.4829629131445341433748716, 0.8365163037378079055752938, 0.2241438680420133810259728, -0.1294095225512603811744494};
inline constexpr double daub3_taps[] = {0.3326705529500826159985116, 0.8068915093110925764944936, 0.4598775021184915700951519, -0.1350110200102545886963899, -0.08544127388202666169281917, 0.03522629188570953660274066};
inline constexpr double daub6_taps[] = {0.1115407433501094636213239, 0.4946238903984530856772042, 0.7511339080210953506789345, 0.3152503517091976290859897, -0.2262646939654398200763145, -0.1297668675672619355622896, 0.09750160558732304910234355, 0.02752286553030572862554084, -0.03158203931748602956507908, 0.0005538422011614961392519184, 0.004777257510945510639635975, -0.001077301085308479564852622};

inline constexpr double lr_delta0   = 0.5569290855221475902187175;
inline constexpr double lr_velocity = 3.591121476668622136649223;

struct BesselRef { double z, k0, k1; };
inline constexpr BesselRef bessel_ref[] = {
    {0.00010000000000000000000, 9.3262719134502749209, 9999.9995086864049573},
    {0.010000000000000000000, 4.7212447301610949651, 99.973894118296247643},
    {0.10000000000000000000, 2.4270690247020166125, 9.8538447808706061348},
    {0.50000000000000000000, 0.92441907122766586178, 1.6564411200033008937},
    {1.0000000000000000000, 0.42102443824070833334, 0.60190723019723457474},
    {2.0000000000000000000, 0.11389387274953343565, 0.13986588181652242728},
    {4.0000000000000000000, 0.011159676085853024270, 0.012483498887268431470},
    {6.0000000000000000000, 0.0012439943280131230852, 0.0013439197177355090057},
    {7.9000000000000000000, 0.00016286766768765327810, 0.00017288430649238990466},
    {8.0000000000000000000, 0.00014647070522281538710, 0.00015536921180500113392},
    {8.1000000000000000000, 0.00013173427864935831982, 0.00013964122894503076139},
    {10.000000000000000000, 0.000017780062316167651811, 0.000018648773453825584597},
    {12.000000000000000000, 2.2008253973114914005e-6, 2.2907574647671878159e-6},
    {16.000000000000000000, 3.4994116639364989360e-8, 3.6071571175287796881e-8},
    {20.000000000000000000, 5.7412378153365242927e-10, 5.8830579695570381777e-10},
    {29.900000000000000000, 2.3606580278508047989e-14, 2.3998143477721718147e-14},
    {30.100000000000000000, 1.9263633621590541027e-14, 1.9581053784899403646e-14},
    {40.000000000000000000, 8.3928611000995670337e-19, 8.4971319548610386508e-19},
    {50.000000000000000000, 3.4101677497894955139e-23, 3.4441022267175556126e-23},
};

// integral - (pi/L) sum of exp(-k^2) over (pi/L)Z at L=2 (theta defect)
inline constexpr double gaussian_poisson_defect_a1_L2 = -0.06492764828707185730551464;

// Bessel-defect channels, f = g = B3(x/0.5) at the origin, L=2, m=1.
// lhs = (integral - (pi/L) sum) of gamma^{sign} fhat^2 over the line/lattice;
// rhs = double integral of the printed Q_{-/+} kernel against f, g.
inline constexpr double bspline_lhs_minus = -0.012584524488831002802;
inline constexpr double bspline_rhs_minus_printed = 0.012584524488831002802;
inline constexpr double bspline_lhs_plus  = 0.0037353098753146551763;
inline constexpr double bspline_rhs_plus_printed  = -0.0018676549376573275881;

// ground-state flow exponents, d=1, eps=1, r=2, m=1, xi=(delta_0, 0), N=0
struct FlowRef { int M; double value; };
inline constexpr FlowRef flow_delta_daub2[] = {
    {0, 0.16261963336745059177},
    {1, 0.14962459406957216375},
    {2, 0.14605708872583530221},
    {4, 0.14501035007296221087},
    {8, 0.14494676839644282747},
    {12, 0.14494652897502209773},
};
inline constexpr FlowRef flow_delta_daub6[] = {
    {0, 0.16261963336745059177},
    {1, 0.15161450333320879716},
    {2, 0.14922081650705697088},
    {4, 0.14850491202237722154},
    {8, 0.14845788024541803480},
    {12, 0.14845769664825312440},
};
inline constexpr double flow_delta_daub2_limit = 0.14494652803777983090;  // k index cutoff 4096
inline constexpr double flow_delta_daub6_limit = 0.14845769592826608395;  // k index cutoff 4096

}  // namespace oracle
