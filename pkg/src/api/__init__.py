# -*- coding: utf-8 -*-
"""idemsys 文档边界：JSON 数据模型与异常体系"""
