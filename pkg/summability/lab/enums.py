class SpaceKind:
    C = 'C'
    LP = 'Lp'


class Theorem:
    T1 = 'T1'
    T2 = 'T2'
    T3 = 'T3'
    T4 = 'T4'
    C1 = 'C1'
    TA = 'TA'
    TB = 'TB'


class Variant:
    FULL_CONJUGATE = 'full_conjugate'
    TRUNCATED_PI_OVER_RN = 'truncated_pi_over_rn'
    TRUNCATED_ANR_OVER_R = 'truncated_Anr_over_r'


class Refinement:
    NONE = 'none'
    CONDITION_113 = '113'
    CONDITION_114 = '114'


class Condition:
    C111 = '111'
    C112 = '112'
    C113 = '113'
    C114 = '114'
    C200 = '200'
    C202 = '202'
    LEMMA3 = 'lemma3'
    LEMMA4 = 'lemma4'
    MODULUS_TYPE = 'modulus-type'
    MATRIX = 'matrix'
    MEMBERSHIP = 'membership'


class ExitCode:
    PASS = 0
    ASSERTION_FAILURE = 1
    CONFIGURATION_ERROR = 2
