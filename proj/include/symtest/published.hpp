#ifndef SYMTEST_PUBLISHED_HPP
#define SYMTEST_PUBLISHED_HPP

#include <array>
#include <cstddef>
#include <optional>

// Published reference values used by `symtest reproduce`. Grids are indexed
// [window row][sample-size column]; a negative entry marks a blank cell.

namespace symtest::published {

inline constexpr std::array<int, 30> kWindows = {2,  3,  4,  5,  6,  7,  8,  9,  10, 11, 12, 13, 14, 15, 16,
                                                 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 30, 40};
inline constexpr std::array<std::size_t, 7> kSizes = {5, 10, 20, 30, 40, 50, 100};

using Grid = std::array<std::array<double, 7>, 30>;

struct GridTable {
  int number;
  double alpha;
  bool is_power;  // false: critical values of |statistic| under N(0,1)
  Grid cells;

  std::optional<double> at(std::size_t row, std::size_t col) const {
    const double v = cells[row][col];
    return v < 0.0 ? std::nullopt : std::optional<double>(v);
  }
};

inline constexpr std::array<GridTable, 6> kGridTables = {{
  {1, 0.10, false, {{
      {0.3151, 0.5250, 0.5743, 0.5777, 0.5738, 0.5590, 0.5197},  // m=2
      {-1, 0.4141, 0.5179, 0.5092, 0.5176, 0.5071, 0.4824},  // m=3
      {-1, 0.3167, 0.4581, 0.4783, 0.4818, 0.4762, 0.4572},  // m=4
      {-1, -1, 0.4183, 0.4501, 0.4535, 0.4588, 0.4401},  // m=5
      {-1, -1, 0.3778, 0.4256, 0.4436, 0.4360, 0.4187},  // m=6
      {-1, -1, 0.3330, 0.3907, 0.4131, 0.4148, 0.4149},  // m=7
      {-1, -1, 0.2948, 0.3652, 0.3901, 0.4076, 0.3955},  // m=8
      {-1, -1, 0.2584, 0.3464, 0.3747, 0.3929, 0.3874},  // m=9
      {-1, -1, -1, 0.3190, 0.3621, 0.3735, 0.3862},  // m=10
      {-1, -1, -1, 0.2989, 0.3409, 0.3681, 0.3676},  // m=11
      {-1, -1, -1, 0.2808, 0.3291, 0.3483, 0.3682},  // m=12
      {-1, -1, -1, 0.2542, 0.3099, 0.3428, 0.3672},  // m=13
      {-1, -1, -1, 0.2324, 0.2991, 0.3311, 0.3631},  // m=14
      {-1, -1, -1, -1, 0.2814, 0.3150, 0.3528},  // m=15
      {-1, -1, -1, -1, 0.2667, 0.3075, 0.3442},  // m=16
      {-1, -1, -1, -1, 0.2497, 0.2906, 0.3373},  // m=17
      {-1, -1, -1, -1, 0.2379, 0.2868, 0.3358},  // m=18
      {-1, -1, -1, -1, 0.2251, 0.2738, 0.3375},  // m=19
      {-1, -1, -1, -1, -1, 0.2589, 0.3329},  // m=20
      {-1, -1, -1, -1, -1, 0.2500, 0.3205},  // m=21
      {-1, -1, -1, -1, -1, 0.2395, 0.3163},  // m=22
      {-1, -1, -1, -1, -1, 0.2305, 0.3126},  // m=23
      {-1, -1, -1, -1, -1, 0.2212, 0.3097},  // m=24
      {-1, -1, -1, -1, -1, -1, 0.3111},  // m=25
      {-1, -1, -1, -1, -1, -1, 0.2977},  // m=26
      {-1, -1, -1, -1, -1, -1, 0.2957},  // m=27
      {-1, -1, -1, -1, -1, -1, 0.2972},  // m=28
      {-1, -1, -1, -1, -1, -1, 0.2896},  // m=29
      {-1, -1, -1, -1, -1, -1, 0.2827},  // m=30
      {-1, -1, -1, -1, -1, -1, 0.2409},  // m=40
  }}},
  {2, 0.05, false, {{
      {0.3637, 0.6093, 0.6673, 0.6703, 0.6658, 0.6474, 0.5969},  // m=2
      {-1, 0.4787, 0.5833, 0.5936, 0.6011, 0.5857, 0.5611},  // m=3
      {-1, 0.3641, 0.5333, 0.5539, 0.5553, 0.5387, 0.5284},  // m=4
      {-1, -1, 0.4776, 0.5216, 0.5287, 0.5305, 0.5054},  // m=5
      {-1, -1, 0.4362, 0.4872, 0.5074, 0.4979, 0.4794},  // m=6
      {-1, -1, 0.3848, 0.4536, 0.4785, 0.4718, 0.4750},  // m=7
      {-1, -1, 0.3460, 0.4207, 0.4543, 0.4647, 0.4573},  // m=8
      {-1, -1, 0.2951, 0.4044, 0.4271, 0.4491, 0.4488},  // m=9
      {-1, -1, -1, 0.3642, 0.4188, 0.4235, 0.4405},  // m=10
      {-1, -1, -1, 0.3440, 0.3953, 0.4259, 0.4242},  // m=11
      {-1, -1, -1, 0.3254, 0.3775, 0.4053, 0.4249},  // m=12
      {-1, -1, -1, 0.2948, 0.3561, 0.3947, 0.4251},  // m=13
      {-1, -1, -1, 0.2751, 0.3515, 0.3821, 0.4203},  // m=14
      {-1, -1, -1, -1, 0.3239, 0.3626, 0.4157},  // m=15
      {-1, -1, -1, -1, 0.3057, 0.3521, 0.3967},  // m=16
      {-1, -1, -1, -1, 0.2868, 0.3433, 0.3901},  // m=17
      {-1, -1, -1, -1, 0.2769, 0.3356, 0.3820},  // m=18
      {-1, -1, -1, -1, 0.2583, 0.3182, 0.3883},  // m=19
      {-1, -1, -1, -1, -1, 0.3011, 0.3779},  // m=20
      {-1, -1, -1, -1, -1, 0.2909, 0.3646},  // m=21
      {-1, -1, -1, -1, -1, 0.2777, 0.3705},  // m=22
      {-1, -1, -1, -1, -1, 0.2697, 0.3607},  // m=23
      {-1, -1, -1, -1, -1, 0.2533, 0.3575},  // m=24
      {-1, -1, -1, -1, -1, -1, 0.3592},  // m=25
      {-1, -1, -1, -1, -1, -1, 0.3446},  // m=26
      {-1, -1, -1, -1, -1, -1, 0.3358},  // m=27
      {-1, -1, -1, -1, -1, -1, 0.3427},  // m=28
      {-1, -1, -1, -1, -1, -1, 0.3355},  // m=29
      {-1, -1, -1, -1, -1, -1, 0.3258},  // m=30
      {-1, -1, -1, -1, -1, -1, 0.2797},  // m=40
  }}},
  {3, 0.01, false, {{
      {0.4569, 0.7690, 0.8663, 0.8474, 0.8501, 0.8292, 0.7548},  // m=2
      {-1, 0.6042, 0.7349, 0.7590, 0.7570, 0.7447, 0.6997},  // m=3
      {-1, 0.4739, 0.6810, 0.7185, 0.6946, 0.6843, 0.6553},  // m=4
      {-1, -1, 0.6158, 0.6570, 0.6695, 0.6629, 0.6488},  // m=5
      {-1, -1, 0.5636, 0.6427, 0.6256, 0.6502, 0.6257},  // m=6
      {-1, -1, 0.4903, 0.5819, 0.6082, 0.5989, 0.6017},  // m=7
      {-1, -1, 0.4428, 0.5273, 0.5784, 0.6020, 0.5835},  // m=8
      {-1, -1, 0.3757, 0.5063, 0.5343, 0.5828, 0.5844},  // m=9
      {-1, -1, -1, 0.4594, 0.5488, 0.5394, 0.5560},  // m=10
      {-1, -1, -1, 0.4536, 0.4971, 0.5462, 0.5438},  // m=11
      {-1, -1, -1, 0.4146, 0.4845, 0.5288, 0.5504},  // m=12
      {-1, -1, -1, 0.3862, 0.4462, 0.5049, 0.5480},  // m=13
      {-1, -1, -1, 0.3467, 0.4364, 0.4878, 0.5433},  // m=14
      {-1, -1, -1, -1, 0.4213, 0.4523, 0.5259},  // m=15
      {-1, -1, -1, -1, 0.4091, 0.4747, 0.5016},  // m=16
      {-1, -1, -1, -1, 0.3727, 0.4471, 0.5187},  // m=17
      {-1, -1, -1, -1, 0.3572, 0.4239, 0.4955},  // m=18
      {-1, -1, -1, -1, 0.3285, 0.4134, 0.4912},  // m=19
      {-1, -1, -1, -1, -1, 0.3869, 0.4794},  // m=20
      {-1, -1, -1, -1, -1, 0.3777, 0.4761},  // m=21
      {-1, -1, -1, -1, -1, 0.3587, 0.4931},  // m=22
      {-1, -1, -1, -1, -1, 0.3505, 0.4606},  // m=23
      {-1, -1, -1, -1, -1, 0.3241, 0.4648},  // m=24
      {-1, -1, -1, -1, -1, -1, 0.4524},  // m=25
      {-1, -1, -1, -1, -1, -1, 0.4469},  // m=26
      {-1, -1, -1, -1, -1, -1, 0.4388},  // m=27
      {-1, -1, -1, -1, -1, -1, 0.4405},  // m=28
      {-1, -1, -1, -1, -1, -1, 0.4270},  // m=29
      {-1, -1, -1, -1, -1, -1, 0.4086},  // m=30
      {-1, -1, -1, -1, -1, -1, 0.3650},  // m=40
  }}},
  {4, 0.10, true, {{
      {0.3168, 0.6397, 0.9151, 0.9822, 0.9966, 0.9998, 1.0000},  // m=2
      {-1, 0.6285, 0.9186, 0.9870, 0.9971, 0.9996, 1.0000},  // m=3
      {-1, 0.6127, 0.9220, 0.9885, 0.9976, 0.9999, 1.0000},  // m=4
      {-1, -1, 0.9166, 0.9856, 0.9990, 0.9999, 1.0000},  // m=5
      {-1, -1, 0.9171, 0.9848, 0.9970, 0.9996, 1.0000},  // m=6
      {-1, -1, 0.9125, 0.9851, 0.9979, 0.9998, 1.0000},  // m=7
      {-1, -1, 0.9106, 0.9850, 0.9984, 0.9996, 1.0000},  // m=8
      {-1, -1, 0.8980, 0.9841, 0.9981, 0.9996, 1.0000},  // m=9
      {-1, -1, -1, 0.9846, 0.9970, 0.9998, 1.0000},  // m=10
      {-1, -1, -1, 0.9836, 0.9978, 0.9993, 1.0000},  // m=11
      {-1, -1, -1, 0.9804, 0.9984, 1.0000, 1.0000},  // m=12
      {-1, -1, -1, 0.9763, 0.9972, 0.9995, 1.0000},  // m=13
      {-1, -1, -1, 0.9776, 0.9969, 0.9996, 1.0000},  // m=14
      {-1, -1, -1, -1, 0.9963, 0.9997, 1.0000},  // m=15
      {-1, -1, -1, -1, 0.9957, 0.9994, 1.0000},  // m=16
      {-1, -1, -1, -1, 0.9960, 0.9996, 1.0000},  // m=17
      {-1, -1, -1, -1, 0.9952, 0.9991, 1.0000},  // m=18
      {-1, -1, -1, -1, 0.9948, 0.9992, 1.0000},  // m=19
      {-1, -1, -1, -1, -1, 0.9994, 1.0000},  // m=20
      {-1, -1, -1, -1, -1, 0.9987, 1.0000},  // m=21
      {-1, -1, -1, -1, -1, 0.9992, 1.0000},  // m=22
      {-1, -1, -1, -1, -1, 0.9987, 1.0000},  // m=23
      {-1, -1, -1, -1, -1, 0.9982, 1.0000},  // m=24
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=25
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=26
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=27
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=28
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=29
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=30
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=40
  }}},
  {5, 0.05, true, {{
      {0.2649, 0.5644, 0.8759, 0.9685, 0.9924, 0.9984, 1.0000},  // m=2
      {-1, 0.5624, 0.8859, 0.9703, 0.9922, 0.9991, 1.0000},  // m=3
      {-1, 0.5534, 0.8769, 0.9749, 0.9957, 0.9997, 1.0000},  // m=4
      {-1, -1, 0.8794, 0.9694, 0.9952, 0.9990, 1.0000},  // m=5
      {-1, -1, 0.8691, 0.9784, 0.9941, 0.9991, 1.0000},  // m=6
      {-1, -1, 0.8756, 0.9756, 0.9945, 0.9995, 1.0000},  // m=7
      {-1, -1, 0.8536, 0.9759, 0.9952, 0.9989, 1.0000},  // m=8
      {-1, -1, 0.8556, 0.9680, 0.9949, 0.9993, 1.0000},  // m=9
      {-1, -1, -1, 0.9679, 0.9936, 0.9991, 1.0000},  // m=10
      {-1, -1, -1, 0.9708, 0.9937, 0.9986, 1.0000},  // m=11
      {-1, -1, -1, 0.9609, 0.9928, 0.9991, 1.0000},  // m=12
      {-1, -1, -1, 0.9589, 0.9945, 0.9991, 1.0000},  // m=13
      {-1, -1, -1, 0.9586, 0.9913, 0.9989, 1.0000},  // m=14
      {-1, -1, -1, -1, 0.9924, 0.9991, 1.0000},  // m=15
      {-1, -1, -1, -1, 0.9902, 0.9988, 1.0000},  // m=16
      {-1, -1, -1, -1, 0.9902, 0.9978, 1.0000},  // m=17
      {-1, -1, -1, -1, 0.9903, 0.9972, 1.0000},  // m=18
      {-1, -1, -1, -1, 0.9870, 0.9984, 1.0000},  // m=19
      {-1, -1, -1, -1, -1, 0.9987, 1.0000},  // m=20
      {-1, -1, -1, -1, -1, 0.9977, 1.0000},  // m=21
      {-1, -1, -1, -1, -1, 0.9971, 1.0000},  // m=22
      {-1, -1, -1, -1, -1, 0.9964, 1.0000},  // m=23
      {-1, -1, -1, -1, -1, 0.9958, 1.0000},  // m=24
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=25
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=26
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=27
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=28
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=29
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=30
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=40
  }}},
  {6, 0.01, true, {{
      {0.1924, 0.4437, 0.8671, 0.9162, 0.9714, 0.9978, 1.0000},  // m=2
      {-1, 0.4483, 0.7861, 0.9273, 0.9760, 0.9981, 1.0000},  // m=3
      {-1, 0.4114, 0.7799, 0.9215, 0.9825, 0.9989, 1.0000},  // m=4
      {-1, -1, 0.7713, 0.9318, 0.9789, 0.9991, 1.0000},  // m=5
      {-1, -1, 0.7566, 0.9186, 0.9830, 0.9991, 1.0000},  // m=6
      {-1, -1, 0.7611, 0.9264, 0.9818, 0.9994, 1.0000},  // m=7
      {-1, -1, 0.7496, 0.9398, 0.9800, 0.9991, 1.0000},  // m=8
      {-1, -1, 0.7502, 0.9302, 0.9802, 0.9991, 1.0000},  // m=9
      {-1, -1, -1, 0.9283, 0.9728, 0.9990, 1.0000},  // m=10
      {-1, -1, -1, 0.9104, 0.9813, 0.9992, 1.0000},  // m=11
      {-1, -1, -1, 0.9127, 0.9744, 0.9989, 1.0000},  // m=12
      {-1, -1, -1, 0.8990, 0.9795, 0.9933, 1.0000},  // m=13
      {-1, -1, -1, 0.8929, 0.9738, 0.9918, 1.0000},  // m=14
      {-1, -1, -1, -1, 0.9721, 0.9942, 1.0000},  // m=15
      {-1, -1, -1, -1, 0.9611, 0.9900, 1.0000},  // m=16
      {-1, -1, -1, -1, 0.9649, 0.9904, 1.0000},  // m=17
      {-1, -1, -1, -1, 0.9565, 0.9897, 1.0000},  // m=18
      {-1, -1, -1, -1, 0.9588, 0.9887, 1.0000},  // m=19
      {-1, -1, -1, -1, -1, 0.9979, 1.0000},  // m=20
      {-1, -1, -1, -1, -1, 0.9984, 1.0000},  // m=21
      {-1, -1, -1, -1, -1, 0.9972, 1.0000},  // m=22
      {-1, -1, -1, -1, -1, 0.9951, 1.0000},  // m=23
      {-1, -1, -1, -1, -1, 0.9974, 1.0000},  // m=24
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=25
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=26
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=27
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=28
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=29
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=30
      {-1, -1, -1, -1, -1, -1, 1.0000},  // m=40
  }}},
}};

struct PowerRow {
  std::size_t n_obs;
  int m;
  double chisq1, chisq2, chisq3, normal;
};

// alpha = 0.05, alternatives chi-square(1), (2), (3) and N(0,1).
inline constexpr std::array<PowerRow, 25> kAlternativePowers = {{
    {20, 2, 0.8759, 0.8861, 0.8627, 0.0231},
    {20, 3, 0.8859, 0.8976, 0.8728, 0.0235},
    {20, 4, 0.8769, 0.8956, 0.8762, 0.0224},
    {20, 5, 0.8794, 0.8943, 0.8715, 0.0263},
    {20, 6, 0.8691, 0.8941, 0.8732, 0.0244},
    {20, 7, 0.8756, 0.8889, 0.8716, 0.0253},
    {20, 8, 0.8536, 0.8814, 0.8643, 0.0230},
    {20, 9, 0.8556, 0.8757, 0.8555, 0.0210},
    {50, 2, 0.9984, 0.9981, 0.9955, 0.0222},
    {50, 4, 0.9997, 0.9991, 0.9969, 0.0263},
    {50, 7, 0.9995, 0.9987, 0.9964, 0.0304},
    {50, 9, 0.9993, 0.9986, 0.9960, 0.0218},
    {50, 15, 0.9991, 0.9985, 0.9961, 0.0261},
    {50, 17, 0.9978, 0.9986, 0.9955, 0.0259},
    {50, 20, 0.9987, 0.9979, 0.9944, 0.0226},
    {50, 22, 0.9971, 0.9976, 0.9946, 0.0247},
    {100, 2, 1.0000, 1.0000, 1.0000, 0.0263},
    {100, 4, 1.0000, 1.0000, 1.0000, 0.0257},
    {100, 5, 1.0000, 1.0000, 1.0000, 0.0238},
    {100, 7, 1.0000, 1.0000, 1.0000, 0.0250},
    {100, 10, 1.0000, 1.0000, 1.0000, 0.0307},
    {100, 15, 1.0000, 1.0000, 1.0000, 0.0239},
    {100, 20, 1.0000, 1.0000, 1.0000, 0.0231},
    {100, 30, 1.0000, 1.0000, 1.0000, 0.0225},
    {100, 40, 1.0000, 1.0000, 1.0000, 0.0250},
}};

struct DatasetRow {
  const char* id;
  std::size_t n_obs;
  int m;
  double statistic;
  double p_value;
};

inline constexpr std::array<DatasetRow, 6> kDatasets = {{
    {"ds1", 20, 2, 0.1531, 0.2969},
    {"ds2", 45, 20, 3.6678, 0.0000},
    {"ds3", 43, 3, 0.1545, 0.2821},
    {"ds4", 51, 25, 6.2144, 0.0000},
    {"ds5", 34, 11, 0.0247, 0.4425},
    {"ds6", 50, 2, 0.5776, 0.0210},
}};

}  // namespace symtest::published

#endif  // SYMTEST_PUBLISHED_HPP
