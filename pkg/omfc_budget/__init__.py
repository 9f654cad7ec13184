"""OMFC Noise Budget - 光机频率转换器辅助引力波探测器的量子噪声预算"""

__version__ = "0.1.0"
