#pragma once

// Frozen reference values of H0^(1)(x) = J0(x) + i Y0(x), computed once
// with 50-digit arbitrary-precision arithmetic and rounded to double.

namespace scatter::testdata {

struct H0Ref {
    double x;
    double re;
    double im;
};

inline constexpr H0Ref kH0RefTable[] = {
    {0.001, 0.99999975000001562, -4.4714166113759233},
    {0.01, 0.99997500015624957, -3.0054556370836459},
    {0.1, 0.99750156206604003, -1.5342386513503668},
    {0.5, 0.93846980724081290, -0.44451873350670656},
    {1.0, 0.76519768655796655, 0.088256964215676958},
    {2.0, 0.22389077914123567, 0.51037567264974512},
    {3.0, -0.26005195490193344, 0.37685001001279038},
    {5.0, -0.17759677131433830, -0.30851762524903378},
    {7.9, 0.19436184484127824, 0.20652094814437577},
    {8.0, 0.17165080713755391, 0.22352148938756622},
    {11.9, 0.025049441699589645, -0.22983321394337506},
    {12.0, 0.047689310796833537, -0.22523731263436143},
    {12.1, 0.069666773606807312, -0.21843838055092549},
    {15.0, -0.014224472826780773, 0.20546429603891826},
    {20.0, 0.16702466434058315, 0.062640596809383831},
    {35.0, -0.12684568275631257, 0.045797987195155641},
    {50.0, 0.055812327669251815, -0.098064995470077079},
    {100.0, 0.019985850304223122, -0.077244313365083152},
    {500.0, -0.034100556880731998, 0.010506708739831374},
};

}  // namespace scatter::testdata
