#pragma once

// Yearly Brazilian income and employment data, 1981-2009, at printed precision.
// Mirrors data/table1.csv.

namespace gpgoodwin::data {

inline constexpr const char* kTable1Csv = R"csv(year,B,B_se,x_t,alpha,alpha_se,x_d,V,Gini,u,du,v,dv,interpolated
1981,0.342,0.016,7.533,2.839,0.091,0.182,14.8,0.574,87.7,,85.2,,0
1982,0.342,0.015,7.473,2.677,0.042,0.174,14.5,0.581,87.2,1.08,85.5,-0.20,0
1983,0.330,0.010,6.910,2.636,0.081,0.175,14.5,0.584,85.5,-0.04,85.5,-1.06,0
1984,0.332,0.013,7.388,2.839,0.072,0.170,12.4,0.576,87.2,-0.17,87.6,-1.32,0
1985,0.329,0.010,7.490,2.656,0.093,0.154,11.8,0.589,85.8,0.99,88.2,-2.22,0
1986,0.344,0.013,7.112,2.567,0.065,0.127,7.9,0.580,85.2,-0.05,92.1,-1.16,0
1987,0.343,0.016,7.626,2.724,0.057,0.127,9.5,0.592,85.9,-0.08,90.5,2.11,0
1988,0.324,0.014,8.140,2.874,0.125,0.133,12.1,0.609,85.4,1.74,87.9,0.17,0
1989,0.317,0.010,7.856,2.428,0.079,0.111,9.9,0.628,82.5,-0.23,90.1,-2.35,0
1990,0.335,0.015,8.074,2.636,0.053,0.099,7.4,0.605,85.9,-1.98,92.6,0.48,0
1991,,,,,,,10.8,,86.4,-0.57,89.2,3.37,1
1992,0.364,0.020,7.635,2.636,0.063,0.162,14.2,0.578,87.0,1.18,85.8,0.53,0
1993,0.330,0.008,7.674,2.567,0.042,0.137,11.9,0.599,84.1,1.01,88.1,-2.54,0
1994,,,,,,,9.1,,85.0,-0.92,90.9,-2.75,1
1995,0.333,0.012,7.887,2.777,0.106,0.098,6.4,0.596,85.9,-0.86,93.6,-0.63,0
1996,0.347,0.020,8.163,2.749,0.107,0.096,7.8,0.598,86.7,-0.12,92.2,0.43,0
1997,0.338,0.015,7.935,2.617,0.052,0.099,7.2,0.598,86.1,1.09,92.8,-0.29,0
1998,0.326,0.009,7.628,2.677,0.031,0.103,7.3,0.597,84.5,0.08,92.7,0.25,0
1999,0.331,0.013,7.811,2.777,0.068,0.107,7.7,0.590,86.0,-0.53,92.3,0.55,0
2000,,,,,,,8.4,,85.6,0.40,91.6,0.66,1
2001,0.335,0.011,7.774,2.724,0.205,0.122,9.0,0.592,85.2,-0.41,91.0,-0.24,0
2002,0.339,0.015,7.878,2.500,0.121,0.123,7.9,0.586,86.4,-0.08,92.1,0.01,0
2003,0.333,0.009,7.374,2.777,0.057,0.134,9.0,0.579,85.4,-0.40,91.0,-1.07,0
2004,0.333,0.017,8.005,3.234,0.133,0.105,5.7,0.582,87.2,-0.44,94.3,-0.59,0
2005,0.326,0.009,7.403,2.839,0.089,0.118,7.9,0.580,86.2,-0.26,92.1,2.06,0
2006,0.323,0.015,8.078,3.749,0.136,0.125,9.9,0.592,87.7,0.27,90.1,-0.29,0
2007,0.334,0.009,6.934,2.839,0.104,0.125,7.3,0.572,85.7,0.28,92.7,-1.03,0
2008,0.366,0.011,6.848,2.567,0.051,0.141,7.8,0.543,87.2,-0.36,92.2,0.26,0
2009,0.363,0.010,6.500,2.656,0.065,0.148,7.8,0.539,86.4,,92.2,,0
)csv";

}  // namespace gpgoodwin::data
