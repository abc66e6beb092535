# -*- coding: utf-8 -*-
"""
idemsys 服务层

- exact_linalg: Q 与 F_p 上的精确线性代数
- solid_matrices: solid / normalized / AO 谓词与对角等价
- idempotent_systems: 幂等系统 Φ_R、对称性与特征数据
- character_systems: 特征代数、半单分解与双线性形式
- correspondences: 三类对象之间的双射与对偶
- enumeration / verification / commands: 普查、恒等式校验、CLI 子命令
"""
