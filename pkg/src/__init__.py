# -*- coding: utf-8 -*-
"""
环面辛容量工具
Delzant 多面体与完备正则扇上的精确容量上下界、Fano 判定与椭球填充证书
"""

__version__ = "1.0.0"
