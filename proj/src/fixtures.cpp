#include "k3lat/dataset.hpp"

namespace k3lat {

// Invariant lattices of the maximal symplectic groups acting on K3^[2]-type
// manifolds. coinv_disc is present only where the candidate forms of all
// invariant lattices of a group agree on a single isometry class.
const std::string &builtin_fixture_text() {
    static const std::string text = R"(# k3lat fixture dataset
group L_2(11)
symplectic_order 660
invariant 3
2 1 0
1 6 0
0 0 22
invariant 3
6 2 2
2 8 -3
2 -3 8
coinv_disc 2
orders 11 11
q 20/11 20/11
b
9/11 0
0 9/11
end

group L_3(4)
symplectic_order 20160
invariant 3
2 0 0
0 10 4
0 4 10
invariant 3
4 2 0
2 4 0
0 0 14
coinv_disc 2
orders 2 42
q 1 23/21
b
0 1/2
1/2 2/21
end

group A_7
symplectic_order 2520
invariant 3
2 1 0
1 2 0
0 0 70
invariant 3
2 0 1
0 6 0
1 0 18
invariant 3
4 2 1
2 6 3
1 3 12
invariant 3
6 3 1
3 6 1
1 1 8
coinv_disc 1
orders 105
q 134/105
b
29/105
end

group Z_2^3:L_2(7)
symplectic_order 1344
invariant 3
4 0 0
0 6 2
0 2 10
end

group Z_2xL_2(7)
symplectic_order 336
invariant 3
2 0 0
0 14 0
0 0 14
invariant 3
4 2 0
2 8 0
0 0 14
end

group Z_2:A_6
invariant 3
2 0 0
0 4 0
0 0 24
invariant 3
4 0 0
0 6 0
0 0 8
end

group Z_2^4:S_5
symplectic_order 1920
invariant 3
2 0 0
0 4 0
0 0 40
invariant 3
4 0 0
0 8 0
0 0 10
end

group S_6
symplectic_order 720
invariant 3
4 2 0
2 4 0
0 0 30
coinv_disc 2
orders 6 30
q 5/3 7/15
b
2/3 1/2
1/2 7/15
end

group M_10
symplectic_order 720
invariant 3
2 0 0
0 4 0
0 0 30
invariant 3
4 2 0
2 6 0
0 0 12
coinv_disc 2
orders 2 60
q 3/2 73/60
b
1/2 0
0 13/60
end

group (Z_3xA_5):Z_2
symplectic_order 360
invariant 3
4 1 0
1 4 0
0 0 30
invariant 3
6 0 0
0 10 5
0 5 10
coinv_disc 2
orders 15 15
q 26/15 28/15
b
11/15 0
0 13/15
end

group Q(Z_3^2:Z_2)
invariant 3
6 2 2
2 6 -2
2 -2 14
end

group Z_2^4:(S_3xS_3)
symplectic_order 576
invariant 3
4 0 0
0 6 0
0 0 24
end

group Z_3^2:QD_16
symplectic_order 144
invariant 3
4 2 0
2 10 0
0 0 12
coinv_disc 2
orders 6 36
q 1/6 65/36
b
1/6 1/6
1/6 29/36
end

group 3^(1+4):2.2^2
symplectic_order 1944
invariant 3
6 0 0
0 6 0
0 0 6
coinv_disc 3
orders 3 6 6
q 4/3 11/6 11/6
b
1/3 0 0
0 5/6 0
0 0 5/6
end

group 3^4:A_6
symplectic_order 29160
invariant 3
6 3 0
3 6 0
0 0 6
coinv_disc 3
orders 3 3 9
q 4/3 4/3 4/9
b
1/3 0 1/3
0 1/3 2/3
1/3 2/3 4/9
end
)";
    return text;
}

} // namespace k3lat
