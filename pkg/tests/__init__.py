"""测试脚本"""
