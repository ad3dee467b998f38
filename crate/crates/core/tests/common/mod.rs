#![allow(dead_code)]

pub mod checks;
pub mod sweep;

/// Rows of the genus-10 table: group, data set, `[D_G; D_F]`.
pub const GENUS10: &[(&str, &str, &str, &str)] = &[
    (
        "M(2,4,2,-1)",
        "((2·4,2,-1),0;[(0,1),(1,2),2],[(1,4),(0,1),4]_3,[(0,1),(1,4),4],[(1,4),(3,4),4])",
        "(4,1;(1,4),(3,4),((1,2),6))",
        "(4,0;((1,4),3),((3,4),3)((1,2),2))",
    ),
    (
        "M(2,4,2,-1)",
        "((2·4,2,-1),0;[(0,1),(1,2),2],[(1,4),(0,1),4],[(0,1),(1,4),4]_3,[(3,4),(1,4),4])",
        "(4,0;((1,4),3),((3,4),3)((1,2),2))",
        "(4,1;(1,4),(3,4),((1,2),6))",
    ),
    (
        "M(2,4,2,-1)",
        "((2·4,2,-1),0;[(0,1),(1,2),2],[(1,4),(0,1),4],[(0,1),(3,4),4],[(1,4),(1,4),4]_3)",
        "(4,1;(1,4),(3,4),((1,2),6))",
        "(4,1;(1,4),(3,4),((1,2),6))",
    ),
    (
        "M(2,4,2,-1)",
        "((2·4,2,-1),0;[(0,1),(1,2),2]_4,[(1,4),(0,1),4],[(0,1),(1,4),4],[(3,4),(1,4),4])",
        "(4,0;(1,4),(3,4),((1,2),10))",
        "(4,0;(1,4),(3,4),((1,2),10))",
    ),
    (
        "M(2,4,2,-1)",
        "((2·4,2,-1),1;[(1,4),(0,1),4],[(0,1),(1,4),4],[(1,4),(1,4),4])",
        "(4,2;(1,4),(3,4),((1,2),2))",
        "(4,2;(1,4),(3,4),((1,2),2))",
    ),
    (
        "M(2,8,4,-1)",
        "((2·8,4,-1),0;[(1,4),(0,1),4],[(1,4),(1,8),4],[(0,1),(1,4),4],[(0,1),(1,8),8])",
        "(4,1;(1,4),(3,4),((1,2),6))",
        "(8,0;(1,8),(7,8),(1,4),(3,4),((1,2),2))",
    ),
    (
        "M(2,8,4,-1)",
        "((2·8,4,-1),0;[(1,4),(0,1),4],[(1,4),(7,8),4],[(0,1),(1,4),4],[(0,1),(3,8),8])",
        "(4,1;(1,4),(3,4),((1,2),6))",
        "(8,0;(3,8),(5,8),(1,4),(3,4),((1,2),2))",
    ),
    (
        "M(2,12,6,7)",
        "((2·12,6,7),0;[(1,4),(1,12),12],[(3,4),(1,3),12],[(0,1),(1,12),12])",
        "(4,2;(1,4),(3,4),((1,2),2))",
        "(12,0;(1,12),(7,12),((1,6),2))",
    ),
    (
        "M(2,12,6,7)",
        "((2·12,6,7),0;[(1,4),(1,6),12],[(3,4),(5,12),12],[(0,1),(5,12),12])",
        "(4,2;(1,4),(3,4),((1,2),2))",
        "(12,0;(5,12),(11,12),((5,6),2))",
    ),
    (
        "M(2,20,10,-1)",
        "((2·20,10,-1),0;[(1,4),(0,1),4],[(1,4),(9,20),4],[(0,1),(1,20),20])",
        "(4,0;(1,4),(3,4),((1,2),10))",
        "(20,0;(1,20),(19,20),((1,2),2))",
    ),
    (
        "M(2,20,10,-1)",
        "((2·20,10,-1),0;[(1,4),(0,1),4],[(1,4),(7,20),4],[(0,1),(3,20),20])",
        "(4,0;(1,4),(3,4),((1,2),10))",
        "(20,0;(3,20),(17,20),((1,2),2))",
    ),
    (
        "M(2,20,10,-1)",
        "((2·20,10,-1),0;[(1,4),(0,1),4],[(1,4),(3,20),4],[(0,1),(7,20),20])",
        "(4,0;(1,4),(3,4),((1,2),10))",
        "(20,0;(7,20),(13,20),((1,2),2))",
    ),
    (
        "M(2,20,10,-1)",
        "((2·20,10,-1),0;[(1,4),(0,1),4],[(1,4),(1,20),4],[(0,1),(9,20),20])",
        "(4,0;(1,4),(3,4),((1,2),10))",
        "(20,0;(9,20),(11,20),((1,2),2))",
    ),
];

/// Rows of the genus-11 table.
pub const GENUS11: &[(&str, &str, &str, &str)] = &[
    (
        "M(2,12,6,-1)",
        "((2·12,6,-1),1;[(0,1),(1,6),6])",
        "(4,3;((1,2),2))",
        "(12,1;(1,6),(5,6))",
    ),
    (
        "M(4,8,4,-1)",
        "((4·8,4,-1),0;[(1,8),(0,1),8],[(7,8),(7,8),8],[(0,1),(1,8),8])",
        "(8,0;(1,8),(5,8),(1,4),((3,4),2),(1,2))",
        "(8,0;((1,8),2),((7,8),2)((1,2),2))",
    ),
    (
        "M(4,8,4,-1)",
        "((4·8,4,-1),0;[(1,8),(1,8),8],[(7,8),(0,1),8],[(0,1),(1,8),8])",
        "(8,0;(3,8),(7,8),((1,4),2),(3,4),(1,2))",
        "(8,0;((1,8),2),((7,8),2)((1,2),2))",
    ),
    (
        "M(4,8,4,-1)",
        "((4·8,4,-1),0;[(1,8),(0,1),8],[(7,8),(5,8),8],[(0,1),(3,8),8])",
        "(8,0;(1,8),(5,8),(1,4),((3,4),2),(1,2))",
        "(8,0;((3,8),2),((5,8),2)((1,2),2))",
    ),
    (
        "M(4,8,4,-1)",
        "((4·8,4,-1),0;[(1,8),(3,8),8],[(7,8),(0,1),8],[(0,1),(3,8),8])",
        "(8,0;(3,8),(7,8),((1,4),2),(3,4),(1,2))",
        "(8,0;((3,8),2),((5,8),2)((1,2),2))",
    ),
    (
        "M(4,8,4,-1)",
        "((4·8,4,-1),0;[(1,8),(1,8),8],[(5,8),(0,1),8],[(1,4),(1,8),8])",
        "(8,0;(1,8),(5,8),((1,4),3),(1,2))",
        "(8,1;(1,4),(3,4)((1,2),2))",
    ),
    (
        "M(4,8,4,-1)",
        "((4·8,4,-1),0;[(1,8),(3,8),8],[(5,8),(0,1),8],[(1,4),(3,8),8])",
        "(8,0;(1,8),(5,8),((1,4),3),(1,2))",
        "(8,1;(1,4),(3,4)((1,2),2))",
    ),
    (
        "M(4,8,4,-1)",
        "((4·8,4,-1),0;[(3,8),(1,8),8],[(3,8),(0,1),8],[(1,4),(1,8),8])",
        "(8,0;(3,8),(7,8),((3,4),3),(1,2))",
        "(8,1;(1,4),(3,4)((1,2),2))",
    ),
    (
        "M(4,8,4,-1)",
        "((4·8,4,-1),0;[(3,8),(3,8),8],[(3,8),(0,1),8],[(1,4),(3,8),8])",
        "(8,0;(3,8),(7,8),((3,4),3),(1,2))",
        "(8,1;(1,4),(3,4)((1,2),2))",
    ),
    (
        "M(2,20,10,11)",
        "((2·20,10,11),1;[(0,1),(1,2),2])",
        "(4,1;((1,2),10))",
        "(20,1;((1,2),2))",
    ),
];
